"""Random instance families and independent reference implementations for tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from kadapt import arrangement
from kadapt.model import AffineInstance, Constraint, FiniteInstance, Scenario, UBox, YSpace
from kadapt.oracle import coverage_set


def _frac(rng, lo=-4, hi=4, dens=(1, 1, 2, 3)):
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def random_finite(rng: random.Random, max_n=4, max_t=8) -> FiniteInstance:
    """Small general-integer instance; may be infeasible for some scenarios."""
    n = rng.randint(1, max_n)
    lower = [rng.randint(-2, 0) for _ in range(n)]
    upper = [l + rng.randint(0, 3) for l in lower]
    ys = YSpace(lower, upper)
    if rng.random() < 0.3:
        row = Constraint([rng.randint(-2, 2) for _ in range(n)], rng.choice([">=", "<="]), rng.randint(-2, 2))
        cut = YSpace(lower, upper, [row])
        if next(cut.enumerate(), None) is not None:
            ys = cut
    scenarios = []
    for _ in range(rng.randint(1, max_t)):
        rows = [
            Constraint([_frac(rng, -3, 3) for _ in range(n)], rng.choice([">=", "<=", "="]) if rng.random() < 0.2 else ">=", _frac(rng, -3, 3))
            for _ in range(rng.randint(0, 2))
        ]
        scenarios.append(Scenario([_frac(rng) for _ in range(n)], rows))
    return FiniteInstance(ys, scenarios, name="random")


def exhaustive_max_coverage(instance: FiniteInstance, uncovered, v):
    """Reference for max_coverage: scan Y in lexicographic order."""
    best = None
    for y in sorted(instance.y_space.enumerate()):
        cov = coverage_set(instance, y, v) & uncovered
        if best is None or len(cov) > len(best[1]):
            best = (y, cov)
    return best


def brute_set_cover(universe: int, subsets) -> int:
    """Minimum cover size by trying all subfamilies in increasing size."""
    target = set(range(universe))
    for k in range(1, len(subsets) + 1):
        for combo in itertools.combinations(subsets, k):
            if set().union(*map(set, combo)) == target:
                return k
    raise ValueError("no cover")


def random_set_cover(rng: random.Random, max_v=12, max_s=10):
    V = rng.randint(1, max_v)
    subsets = [rng.sample(range(V), rng.randint(1, max(1, V // 2))) for _ in range(rng.randint(1, max_s))]
    # patch coverage by adding missing elements to random subsets
    for v in range(V):
        if not any(v in S for S in subsets):
            rng.choice(subsets).append(v)
    return V, subsets


def random_affine(rng: random.Random, fixed: bool = False, obj_xi: bool = False) -> AffineInstance:
    """n_ξ = 2, binary Y with 2..4 variables, one first-stage coordinate."""
    n_y = rng.randint(2, 4)
    m = rng.randint(1, 2)
    n_xi = 2
    r = lambda lo, hi: rng.randint(lo, hi)  # noqa: E731
    X = [(0,), (1,)] if rng.random() < 0.5 else [(1,)]
    B = [[r(-2, 2) for _ in range(n_y)] for _ in range(m)]
    Bi = [[[0 if fixed else r(-1, 1) for _ in range(n_y)] for _ in range(m)] for _ in range(n_xi)]
    A = [[r(-2, 2)] for _ in range(m)]
    Ai = [[[r(-1, 1)] for _ in range(m)] for _ in range(n_xi)]
    H = [[r(-2, 2) for _ in range(n_xi)] for _ in range(m)]
    h = [r(-3, 1) for _ in range(m)]
    U = UBox([0, Fraction(r(0, 1), 2)], [r(2, 3), Fraction(r(4, 6), 2)])
    cost = [r(0, 4) for _ in range(n_y)]
    cost_xi = [[r(-2, 2) for _ in range(n_y)] for _ in range(n_xi)] if obj_xi else []
    return AffineInstance(X, YSpace.binary(n_y), A, Ai, B, Bi, H, h, U, cost, cost_xi, name="random-affine")


def usable_affine(rng: random.Random, fixed: bool = False, obj_xi: bool = False, need_feasible: bool = True):
    """Draw until the arrangement is within guards, nontrivial, and every cell has a feasible y."""
    while True:
        inst = random_affine(rng, fixed, obj_xi)
        ok = True
        for x in inst.X:
            planes = arrangement.hyperplanes_for(inst, x)
            if not planes or len(planes) > arrangement.MAX_PLANES:
                ok = False
                break
            if need_feasible:
                _, regions = arrangement.regions_for(inst, x)
                if any(not r.feasible_set for r in regions):
                    ok = False
                    break
        if ok:
            return inst
