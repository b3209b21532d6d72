from fractions import Fraction

import pytest

from kadapt.generators import (
    KNAPSACK_SCALE,
    builtin_example,
    builtin_names,
    cardinality_band,
    generate_knapsack,
    reduce_set_cover,
    simplex_units,
)
from kadapt.model import validate


def test_knapsack_is_deterministic():
    assert generate_knapsack(12, 10, 7) == generate_knapsack(12, 10, 7)
    assert generate_knapsack(12, 10, 7) != generate_knapsack(12, 10, 8)


def test_knapsack_structure():
    inst = generate_knapsack(20, 30, 3)
    assert validate(inst) == []
    a_bar, c_bar = inst.info["a_bar"], inst.info["c_bar"]
    assert inst.info["gamma"] == 5
    assert inst.info["b"] == Fraction(KNAPSACK_SCALE * sum(a_bar), 5)
    assert all(40 <= a <= 60 for a in a_bar)
    assert all(abs(c - a) <= 5 for a, c in zip(a_bar, c_bar))
    for sc in inst.scenarios:
        up_cost = [i for i, (v, c) in enumerate(zip(sc.objective, c_bar)) if v != KNAPSACK_SCALE * c]
        w = sc.constraints[0].row
        up_w = [i for i, (v, a) in enumerate(zip(w, a_bar)) if v != KNAPSACK_SCALE * a]
        assert len(up_cost) == 5 and len(up_w) == 5
        assert all(sc.objective[i] == Fraction(3, 2) * KNAPSACK_SCALE * c_bar[i] for i in up_cost)


def test_knapsack_scenarios_are_nested_in_t():
    small, big = generate_knapsack(10, 5, 4), generate_knapsack(10, 9, 4)
    assert big.scenarios[:5] == small.scenarios


def test_knapsack_rejects_bad_sizes():
    with pytest.raises(ValueError):
        generate_knapsack(0, 3, 1)


def test_set_cover_reduction():
    inst = reduce_set_cover(3, [[0, 1], [2]])
    assert list(inst.y_space.enumerate()) == [(1, 1, 0), (0, 0, 1)]
    assert inst.t == 3
    with pytest.raises(ValueError):
        reduce_set_cover(3, [[0, 1]])
    with pytest.raises(ValueError):
        reduce_set_cover(2, [[0, 5]])


def test_simplex_units_layout():
    inst = simplex_units(3)
    assert inst.t == 7
    assert inst.info["supports"][0] == [0] and inst.info["supports"][6] == [0, 1, 2]
    assert inst.scenarios[6].objective == (Fraction(1, 3),) * 3


def test_cardinality_band_midpoints():
    inst = cardinality_band(3)
    assert inst.t == 3
    feas = [[y for y in inst.y_space.enumerate() if sc.feasible(y)] for sc in inst.scenarios]
    assert [sorted({sum(y) for y in f}) for f in feas] == [[0], [1], [2]]


def test_builtin_lookup():
    assert set(builtin_names()) >= {"simplex-units", "cardinality-band", "recourse-regions"}
    assert builtin_example("simplex-units(2)").t == 3
    assert builtin_example("cardinality-band", 4).t == 4
    with pytest.raises(ValueError):
        builtin_example("nope")
    with pytest.raises(ValueError):
        builtin_example("simplex-units")
