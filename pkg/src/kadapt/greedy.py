"""Greedy approximation of the minimal number of policies for finite scenario sets.

The greedy loop repeatedly picks the policy covering the most still-uncovered
scenarios at the two-stage value ``v*``.  The pick is the exact optimum of the
max-coverage integer program

    max  Σ_{ξ∈U'} z_ξ
    s.t. g(y, ξ)   <= v* + M (1 - z_ξ)       ξ ∈ U'
         B(ξ) y    >= h(ξ) - M (1 - z_ξ)     ξ ∈ U'
         y ∈ Y,  z ∈ {0,1}^{U'}

solved here without big-M: a scenario may only count when all of its rows
(including ``c·y <= v*``) can still hold for some completion of the partial
``y``, and the number of such scenarios bounds the subtree.  A big-M model
would need ``M >= max_j (max_y |c_j·y| + |v*|)`` and the analogous row slack
bound; a too-small M silently cuts optimal solutions, which this avoids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._search import MaxCoverSearch, integerize
from .coverage import CoverageSet
from .errors import UncoverableScenarios
from .model import FiniteInstance
from .oracle import ScenarioTable, enumerate_y, two_stage_value
from .rational import INF

GUARANTEE_SLACK = 1e-12


def _objective_row(objective, v):
    return (tuple(-c for c in objective), -Fraction(v))


def max_coverage(instance: FiniteInstance, uncovered: CoverageSet, v_star):
    """Policy covering the most scenarios of ``uncovered`` at threshold ``v_star``.

    Returns ``(y, covered, count)`` where ``covered`` is the part of
    ``uncovered`` that ``y`` covers.  Among maximisers the lexicographically
    smallest ``y`` is returned.  ``count == 0`` means nothing in ``uncovered``
    can be covered.
    """
    t = instance.t
    idx = list(uncovered)
    if not idx:
        raise ValueError("uncovered must be nonempty")
    ys = instance.y_space
    if ys.explicit is not None:
        points = enumerate_y(instance)
        cov = ScenarioTable(instance, points).covered(v_star)[:, idx]
        counts = cov.sum(axis=1)
        best = int(np.argmax(counts))  # first maximiser; points are sorted
        y = tuple(int(v) for v in points[best])
        hit = [j for j, ok in zip(idx, cov[best]) if ok]
        return y, CoverageSet.from_indices(hit, t), int(counts[best])

    groups = []
    for j in idx:
        sc = instance.scenarios[j]
        rows = sc.ge_rows()
        if v_star != INF:
            rows = rows + [_objective_row(sc.objective, v_star)]
        groups.append(integerize(rows))
    search = MaxCoverSearch(groups, integerize(ys.ge_rows()), ys.lower, ys.upper)
    count, y, mask = search.run()
    if y is None:
        raise ValueError("Y is empty")
    hit = [j for j, ok in zip(idx, mask) if ok]
    return y, CoverageSet.from_indices(hit, t), count


@dataclass
class Step:
    policy: tuple
    newly_covered: int
    scenarios: list


@dataclass
class MinKResult:
    k_lb: int
    k_ub: int
    policies: list
    trace: list = field(default_factory=list)
    optimal_value: Fraction | None = None
    tie_break: str = "lexicographic"

    def to_dict(self) -> dict:
        from .rational import format_rational

        return {
            "k_lb": self.k_lb,
            "k_ub": self.k_ub,
            "v_star": format_rational(self.optimal_value),
            "policies": [list(p) for p in self.policies],
            "trace": [
                {"policy": list(s.policy), "newly_covered": s.newly_covered, "scenarios": s.scenarios}
                for s in self.trace
            ],
            "tie_break": self.tie_break,
        }


def greedy_min_k(instance: FiniteInstance, v_star=None) -> MinKResult:
    """Greedy cover of all scenarios at ``v*``; ``k_ub`` policies, ``k_lb = ceil(t / opt(U))``."""
    if v_star is None:
        v_star = two_stage_value(instance)
    t = instance.t
    left = CoverageSet.full(t)
    policies, trace = [], []
    first = None
    while left:
        y, hit, count = max_coverage(instance, left, v_star)
        if count == 0:
            raise UncoverableScenarios(list(left))
        if first is None:
            first = count
        policies.append(y)
        trace.append(Step(y, count, hit.indices()))
        left = left - hit
    return MinKResult(
        k_lb=-(-t // first),
        k_ub=len(policies),
        policies=policies,
        trace=trace,
        optimal_value=v_star,
    )


def guarantee_ratio(t: int) -> float:
    """Approximation factor ``1 + ln t`` of the greedy cover."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return 1.0 + math.log(t)


def guarantee_holds(k_ub: int, k_opt: int, t: int) -> bool:
    return k_ub <= guarantee_ratio(t) * k_opt + GUARANTEE_SLACK
