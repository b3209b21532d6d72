import json
import math
import random
from fractions import Fraction

import pytest

from helpers import random_affine
from kadapt import arrangement
from kadapt.bounds import (
    BoundReport,
    approx_gap,
    constraint_approx_gap,
    constraint_k_bound,
    diam_of_yspace,
    diam_report,
    eta_integer_trace,
    eta_integer_x,
    eta_mixed_trace,
    eta_mixed_x,
    facility_location_counts,
    matrix_rank,
    objective_bound,
    omega,
    policies_for_alpha,
    region_count_bound,
)
from kadapt.generators import cardinality_band_affine, recourse_regions, simplex_units
from kadapt.model import AffineInstance, Constraint, UBox, YSpace
from kadapt.oracle import brute_force_opt_k


def test_objective_bound():
    assert objective_bound(2) == 3
    assert objective_bound(1000) == 1001
    assert objective_bound(1) == 2
    with pytest.raises(ValueError):
        objective_bound(0)


def test_approx_gap():
    assert approx_gap(1, 1, 3, 3) == 0
    assert approx_gap(1, 1, 1, 7) == pytest.approx(math.log(7))
    assert approx_gap(1, 2, 2, 4) == pytest.approx(2 * math.log(2))
    with pytest.raises(ValueError):
        approx_gap(1, 1, 4, 3)
    with pytest.raises(ValueError):
        approx_gap(0, 1, 1, 2)


def test_figure_curve_value():
    # C = 1, n_ξ = 1000, k = 500: C·ln((n_ξ+1)/k)
    assert approx_gap(1, 1, 500, 1001) == pytest.approx(math.log(1001 / 500))
    assert approx_gap(1, 1, 500, 1001) == pytest.approx(0.694, abs=5e-4)


def test_policies_for_alpha():
    assert policies_for_alpha(1, 1, 9, 0) == 10
    assert policies_for_alpha(1, 1, 9, math.log(2)) == 5
    assert policies_for_alpha(1, 1, 9, math.inf) == 1
    assert policies_for_alpha(1, 0, 9, 0.5) == 1
    with pytest.raises(ValueError):
        policies_for_alpha(1, 1, 9, -1)


def test_policies_for_alpha_is_minimal():
    # the returned k makes the gap bound <= α, and k-1 does not
    for n_xi in (3, 9, 40):
        for alpha in (0.1, 0.5, 1.3):
            k = policies_for_alpha(1, 1, n_xi, alpha)
            assert math.log((n_xi + 1) / k) <= alpha + 1e-12
            if k > 1:
                assert math.log((n_xi + 1) / (k - 1)) > alpha


def test_diam():
    assert diam_of_yspace(YSpace.binary(4)) == 2
    assert diam_of_yspace(YSpace([1, 2], [1, 2])) == 0
    assert diam_of_yspace(YSpace.binary(2, [Constraint([1, 1], "=", 1)])) == pytest.approx(math.sqrt(2))
    big = YSpace([0] * 13, [1] * 13, [Constraint([1] * 13, "<=", 1)])
    value, exact = diam_report(big)
    assert not exact and value == pytest.approx(math.sqrt(13))


def test_eta_recourse_regions_hand_values():
    inst = recourse_regions()
    tr = eta_integer_trace(inst)
    # rhs h - By ranges over [-4, 0]; ξ1 coefficient over [0, 1]; ξ2 over [-1, 0]
    assert tr["v_upper"] == [0, 1, 0] and tr["v_lower"] == [-4, 0, -1]
    assert eta_integer_x(inst) == 20
    assert eta_mixed_trace(inst)["beta"] == [[2, 1, 2], [5, 1, 1]]
    assert eta_mixed_x(inst) == 9


def test_eta_trimmed_rhs_is_smaller_and_still_valid():
    inst = recourse_regions()
    trimmed = eta_integer_x(inst, trim_rhs=True)
    assert trimmed == 12
    assert len(arrangement.hyperplanes_for(inst, ())) <= trimmed <= eta_integer_x(inst)


def _collapsed(h, m=2):
    return AffineInstance(
        [(0,), (1,)], YSpace.binary(2), [[1]] * m, [[[0]] * m], [[0, 0]] * m, [[[0, 0]] * m],
        [[0]] * m, h, UBox([0], [1]),
    )


def test_eta_collapsed_products():
    inst = _collapsed([0, 3])
    tr = eta_integer_trace(inst)
    assert tr["counts"][1:] == [1]
    assert tr["eta"] == tr["counts"][0] == (3 - (-1)) + 1


def test_eta_mixed_singleton_y_is_m():
    inst = AffineInstance(
        [()], YSpace([1, 0], [1, 0]), [[], [], []], [[[], [], []]], [[2, 1], [1, 1], [0, 3]],
        [[[1, 1], [0, 2], [1, 0]]], [[1], [0], [2]], [0, 0, 0], UBox([0], [1]),
    )
    assert eta_mixed_x(inst) == 3


def test_eta_fixed_recourse_mixed_is_sum_of_beta0():
    inst = cardinality_band_affine(3)
    tr = eta_mixed_trace(inst)
    assert all(row[1:] == [1] for row in tr["beta"])
    assert tr["eta"] == sum(row[0] for row in tr["beta"]) == 8


def test_eta_at_least_one():
    inst = _collapsed([5], m=1)
    assert eta_integer_x(inst, trim_rhs=True) >= 1


def test_matrix_rank():
    assert matrix_rank([[0, 0], [0, 0]]) == 0
    assert matrix_rank([[1, 2], [2, 4]]) == 1
    assert matrix_rank([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == 3
    assert matrix_rank([[Fraction(1, 2), 1], [1, 2], [0, 1]]) == 2


def test_omega_examples():
    assert omega(cardinality_band_affine(5)) == 1
    assert omega(recourse_regions()) == 2
    zero = _collapsed([0, 1])
    assert omega(zero) == 0


def test_omega_bounded_by_min_m_nxi():
    rng = random.Random(3)
    for _ in range(30):
        inst = random_affine(rng)
        assert omega(inst) <= min(inst.m, inst.n_xi)


def test_region_count_bound():
    assert region_count_bound(3, 2) == 7
    assert region_count_bound(5, 0) == 1
    assert region_count_bound(1, 4) == 2
    assert region_count_bound(101, 5) == sum(math.comb(101, i) for i in range(6))
    with pytest.raises(ValueError):
        region_count_bound(0, 1)


def test_constraint_k_bound_fixed_recourse_obj_free():
    inst = cardinality_band_affine(4)
    rep = constraint_k_bound(inst, fixed_recourse=True, objective_uncertain=False)
    tr = rep.formula_trace
    assert tr["exponent"] == tr["omega"] == 1
    assert tr["R"] == region_count_bound(tr["eta"], 1)
    assert rep.value == min(tr["R"], 16)
    assert tr["formula"] == "min(R, |Y|)"


def test_constraint_k_bound_with_empirical_eta():
    # with η = n_y + 1 hyperplanes and ω = 1 the region bound is n_y + 2
    n = 6
    inst = cardinality_band_affine(n)
    eta = len(arrangement.hyperplanes_for(inst, ()))
    assert eta == n + 1
    rep = constraint_k_bound(inst, eta=eta)
    assert rep.formula_trace["R"] == n + 2
    assert rep.value == n + 2


def test_constraint_k_bound_objective_uncertain():
    inst = random_affine(random.Random(1), obj_xi=True)
    rep = constraint_k_bound(inst)
    tr = rep.formula_trace
    assert rep.value == min(tr["R"] * (inst.n_xi + 1), tr["Y_count"])


def test_constraint_k_bound_rejects_false_claims():
    with pytest.raises(ValueError):
        constraint_k_bound(recourse_regions(), fixed_recourse=True)
    inst = random_affine(random.Random(1), obj_xi=True)
    with pytest.raises(ValueError):
        constraint_k_bound(inst, objective_uncertain=False)


def test_bound_report_json():
    rep = constraint_k_bound(recourse_regions())
    doc = json.loads(rep.to_json())
    assert doc["name"] == "constraint_k_bound"
    assert doc["formula_trace"]["eta"] == 9
    assert doc["value"] == 4  # |Y| = 4 caps the region bound
    assert isinstance(BoundReport("x", Fraction(1, 2)).to_dict()["value"], str)


def test_constraint_approx_gap():
    assert constraint_approx_gap(1, 1, 9, 3, 10) == 0
    assert constraint_approx_gap(1, 1, 9, 3, 5) == pytest.approx(math.log(2))
    gaps = [constraint_approx_gap(1, 1, 9, 3, s) for s in range(1, 11)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        constraint_approx_gap(1, 1, 9, 3, 11)


def test_facility_location_table():
    expected = {10: (1e10, 9.8e6), 50: (3.1e13, 8.9e34), 100: (1e15, 7.9e69), 250: (9.8e16, 5.5e174)}
    for J, (bound, ys) in expected.items():
        b, y = facility_location_counts(J)
        assert b == pytest.approx(bound, rel=0.02)
        assert y == pytest.approx(ys, rel=0.02)
    assert facility_location_counts(10)[0] == 10**10


def test_gap_bound_dominates_exact_gap_on_simplex():
    inst = simplex_units(3)
    exact = brute_force_opt_k(inst, 2) - brute_force_opt_k(inst, 3)
    assert exact == Fraction(1, 6)
    assert float(exact) <= approx_gap(1, math.sqrt(2), 2, 3)
