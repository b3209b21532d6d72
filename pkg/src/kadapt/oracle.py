"""Exact scenario solvers, coverage sets and brute-force oracles.

Everything here is exact: rational data are scaled row by row to integers
before any vectorised evaluation, and ``INF`` marks infeasibility.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from ._search import integerize, solve_min
from .coverage import CoverageSet
from .errors import GuardExceeded, TwoStageInfeasible
from .model import FiniteInstance
from .rational import INF, lcm_of_denominators

ORACLE_MAX_Y = 2**22
ORACLE_MAX_T = 64
_CHUNK = 1 << 15


def solve_scenario(instance: FiniteInstance, j: int):
    """Minimum of ``c_j·y`` over ``y ∈ Y`` feasible for scenario ``j``.

    Returns ``(value, y)``; ``(INF, None)`` if no ``y`` is feasible.  Ties go
    to the lexicographically smallest ``y``.
    """
    if not 0 <= j < instance.t:
        raise IndexError(f"scenario {j} outside 0..{instance.t - 1}")
    sc = instance.scenarios[j]
    ys = instance.y_space
    if ys.explicit is not None:
        best = (INF, None)
        for y in sorted(ys.enumerate()):
            if sc.feasible(y):
                val = sc.value(y)
                if val < best[0]:
                    best = (val, y)
        return best
    scale = lcm_of_denominators(sc.objective)
    objective = [int(c * scale) for c in sc.objective]
    rows = integerize(sc.ge_rows() + ys.ge_rows())
    val, y = solve_min(objective, rows, ys.lower, ys.upper)
    if y is None:
        return INF, None
    return Fraction(val, scale), y


def scenario_values(instance: FiniteInstance):
    return [solve_scenario(instance, j) for j in range(instance.t)]


def two_stage_value(instance: FiniteInstance) -> Fraction:
    """``v* = max_j min_{y feasible at j} c_j·y``."""
    best = None
    for j in range(instance.t):
        val, _ = solve_scenario(instance, j)
        if val == INF:
            raise TwoStageInfeasible(j)
        if best is None or val > best:
            best = val
    return best


def coverage_set(instance: FiniteInstance, y, v) -> CoverageSet:
    """Scenarios where ``y`` is feasible and ``c_j·y <= v`` (direct evaluation)."""
    y = tuple(y)
    if y not in instance.y_space:
        raise ValueError(f"{y} is not in Y")
    bits = 0
    for j, sc in enumerate(instance.scenarios):
        if sc.feasible(y) and (v == INF or sc.value(y) <= v):
            bits |= 1 << j
    return CoverageSet(bits, instance.t)


def evaluate_k_solution(instance: FiniteInstance, policies):
    """``max_j min_{i: y^i feasible at j} c_j·y^i``; ``INF`` when some scenario is left out."""
    policies = [tuple(p) for p in policies]
    for p in policies:
        if p not in instance.y_space:
            raise ValueError(f"{p} is not in Y")
    if not policies:
        return INF
    worst = None
    for sc in instance.scenarios:
        vals = [sc.value(p) for p in policies if sc.feasible(p)]
        if not vals:
            return INF
        v = min(vals)
        if worst is None or v > worst:
            worst = v
    return worst


# ---------------------------------------------------------------------------
# vectorised evaluation over enumerated Y


def enumerate_y(instance: FiniteInstance, guard: int = ORACLE_MAX_Y) -> np.ndarray:
    """All members of Y as a ``(|Y|, n_y)`` integer array, lexicographically sorted."""
    ys = instance.y_space
    if ys.size_hint > guard:
        raise GuardExceeded(f"instance too large for oracle: |Y| candidates {ys.size_hint} > {guard}")
    n = ys.n
    if ys.explicit is not None:
        pts = sorted(ys.enumerate())
        return np.array(pts, dtype=np.int64).reshape(len(pts), n)
    it = itertools.product(*(range(l, u + 1) for l, u in zip(ys.lower, ys.upper)))
    rows = integerize(ys.ge_rows())
    chunks = []
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            break
        P = np.array(block, dtype=np.int64).reshape(len(block), n)
        keep = np.ones(len(P), dtype=bool)
        for w, r in rows:
            keep &= _matmul(P, w) >= r
        chunks.append(P[keep])
    return np.concatenate(chunks) if chunks else np.zeros((0, n), dtype=np.int64)


def _matmul(P: np.ndarray, w) -> np.ndarray:
    big = int(np.abs(P).max()) if P.size else 0
    bound = sum(abs(c) for c in w) * big
    if bound < 2**62:
        return P @ np.array(w, dtype=np.int64)
    return P.astype(object) @ np.array(w, dtype=object)


class ScenarioTable:
    """Per-scenario objective values and feasibility over a fixed point set.

    ``values[p, j]`` is ``scaled[p, j] / denom[j]`` exactly.
    """

    def __init__(self, instance: FiniteInstance, points: np.ndarray):
        self.points = points
        P, t = len(points), instance.t
        self.feasible = np.ones((P, t), dtype=bool)
        self.scaled = np.zeros((P, t), dtype=object)
        self.denom = []
        for j, sc in enumerate(instance.scenarios):
            d = lcm_of_denominators(sc.objective)
            self.denom.append(d)
            self.scaled[:, j] = _matmul(points, [int(c * d) for c in sc.objective])
            for w, r in integerize(sc.ge_rows()):
                self.feasible[:, j] &= _matmul(points, w) >= r

    def covered(self, v) -> np.ndarray:
        """Boolean ``(P, t)`` matrix: feasible and value ``<= v``."""
        if v == INF:
            return self.feasible.copy()
        v = Fraction(v)
        out = self.feasible.copy()
        for j, d in enumerate(self.denom):
            # scaled/d <= p/q  <=>  scaled*q <= p*d
            out[:, j] &= self.scaled[:, j] * v.denominator <= v.numerator * d
        return out

    def values_at(self, j: int):
        d = self.denom[j]
        return [Fraction(int(s), d) for s in self.scaled[:, j]]


def _row_bits(matrix: np.ndarray) -> list[int]:
    weights = [1 << j for j in range(matrix.shape[1])]
    return [sum(w for w, b in zip(weights, row) if b) for row in matrix.tolist()]


def _check_oracle_guard(instance):
    if instance.t > ORACLE_MAX_T:
        raise GuardExceeded(f"instance too large for oracle: t={instance.t} > {ORACLE_MAX_T}")


# ---------------------------------------------------------------------------
# exact minimum set cover


def _reduce_sets(sets: list[int]) -> list[int]:
    """Distinct, non-dominated, nonempty sets, largest first."""
    uniq = sorted({s for s in sets if s}, key=lambda s: (-s.bit_count(), s))
    kept = []
    for s in uniq:
        if not any(s & ~k == 0 for k in kept):
            kept.append(s)
    return kept


def greedy_cover(sets: list[int], universe: int) -> list[int] | None:
    chosen, left = [], universe
    while left:
        best = max(sets, key=lambda s: (s & left).bit_count(), default=0)
        if not best & left:
            return None
        chosen.append(best)
        left &= ~best
    return chosen


def min_set_cover(sets: list[int], universe: int, limit: int | None = None) -> list[int] | None:
    """Exact minimum cover of ``universe`` by ``sets`` (bitmasks).

    Depth-first branch-and-bound: branch on the lowest uncovered element over
    the sets containing it; prune with ``|chosen| + ceil(|left| / max gain)``.
    With ``limit`` only covers of size ``<= limit`` are searched.  Returns the
    chosen masks or ``None`` when no (small enough) cover exists.
    """
    sets = _reduce_sets([s & universe for s in sets])
    if not universe:
        return []
    if not sets:
        return None
    incumbent = greedy_cover(sets, universe)
    if incumbent is None:
        return None
    best = [incumbent]
    cap = len(incumbent) if limit is None else min(len(incumbent), limit + 1)
    bound = [cap]
    if limit is not None and len(incumbent) <= limit:
        return incumbent
    width = universe.bit_length()
    containing = [[s for s in sets if s >> e & 1] for e in range(width)]

    def dfs(left: int, chosen: list[int]):
        if not left:
            best[0] = list(chosen)
            bound[0] = len(chosen)
            return
        gain = max((s & left).bit_count() for s in sets)
        if len(chosen) + -(-left.bit_count() // gain) >= bound[0]:
            return
        e = (left & -left).bit_length() - 1
        for s in sorted(containing[e], key=lambda s: -(s & left).bit_count()):
            chosen.append(s)
            dfs(left & ~s, chosen)
            chosen.pop()

    dfs(universe, [])
    if limit is not None and len(best[0]) > limit:
        return None
    return best[0]


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_force_min_k(instance: FiniteInstance):
    """Exact minimal ``k`` with ``opt(k) = v*`` and a witness policy list."""
    _check_oracle_guard(instance)
    v_star = two_stage_value(instance)
    points = enumerate_y(instance)
    table = ScenarioTable(instance, points)
    bits = _row_bits(table.covered(v_star))
    owner: dict[int, tuple] = {}
    for p, b in zip(points.tolist(), bits):
        owner.setdefault(b, tuple(p))
    cover = min_set_cover(list(owner), (1 << instance.t) - 1)
    if cover is None:  # pragma: no cover - v* is attained per scenario
        raise TwoStageInfeasible(-1, "no cover at v*")
    return len(cover), [owner[s] for s in cover]


def brute_force_opt_k(instance: FiniteInstance, k: int):
    """Exact ``opt(k)`` for ``k >= 1``.

    ``opt(k) <= v`` iff the coverage sets at threshold ``v`` admit a cover of
    size ``<= k``; this is monotone in ``v``, so a binary search over the
    finitely many attainable values ``c_j·y`` finds the optimum.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_oracle_guard(instance)
    points = enumerate_y(instance)
    table = ScenarioTable(instance, points)
    universe = (1 << instance.t) - 1
    if min_set_cover(_row_bits(table.covered(INF)), universe, limit=k) is None:
        return INF
    candidates = set()
    for j in range(instance.t):
        vals = table.values_at(j)
        candidates.update(v for v, ok in zip(vals, table.feasible[:, j]) if ok)
    v_star = two_stage_value(instance)
    candidates = sorted(v for v in candidates if v >= v_star)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if min_set_cover(_row_bits(table.covered(candidates[mid])), universe, limit=k) is not None:
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def exhaustive_opt_k(instance: FiniteInstance, k: int):
    """Reference ``opt(k)`` by trying every k-multiset of Y; tiny instances only."""
    pts = [tuple(p) for p in enumerate_y(instance).tolist()]
    k = min(k, len(pts))
    return min(evaluate_k_solution(instance, c) for c in itertools.combinations(pts, k))
