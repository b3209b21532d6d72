"""Instance generators and the built-in examples.

Randomness comes from ``random.Random`` (MT19937), seeded with the caller's
integer seed.  ``randint`` and ``sample`` have had a fixed algorithm since
Python 3.2, so a seed yields the same instance on every platform.
"""

from __future__ import annotations

import itertools
import random
import re
from fractions import Fraction

from .model import AffineInstance, Constraint, FiniteInstance, Scenario, UBox, YSpace

# Costs, weights and capacity are multiplied by 10 so that the 1.5x
# deviations and the 0.2 capacity factor stay integral.
KNAPSACK_SCALE = 10


def generate_knapsack(n_y: int, t: int, seed: int) -> FiniteInstance:
    """Random min-knapsack family with budgeted scenario deviations.

    Base weights ``a_i ~ U{40..60}``, capacity ``b = 0.2 Σ a_i``, base costs
    ``c_i ~ U{a_i-5..a_i+5}``.  Each scenario raises ``Γ = n_y // 4`` random
    costs and (independently) ``Γ`` random weights by 50%.  Scenario ``j``
    asks for ``a(ξ^j)·y >= b`` and charges ``c(ξ^j)·y``.  All data are stored
    scaled by ``KNAPSACK_SCALE``.
    """
    if n_y < 1 or t < 1:
        raise ValueError(f"need n_y >= 1 and t >= 1, got n_y={n_y}, t={t}")
    rng = random.Random(seed)
    s = KNAPSACK_SCALE
    a_bar = [rng.randint(40, 60) for _ in range(n_y)]
    c_bar = [rng.randint(a - 5, a + 5) for a in a_bar]
    b = Fraction(s * sum(a_bar), 5)
    gamma = n_y // 4
    scenarios = []
    for _ in range(t):
        cost_dev = set(rng.sample(range(n_y), gamma))
        weight_dev = set(rng.sample(range(n_y), gamma))
        cost = [Fraction(3 * s * c, 2) if i in cost_dev else s * c for i, c in enumerate(c_bar)]
        weight = [Fraction(3 * s * a, 2) if i in weight_dev else s * a for i, a in enumerate(a_bar)]
        scenarios.append(Scenario(cost, [Constraint(weight, ">=", b)]))
    return FiniteInstance(
        YSpace.binary(n_y),
        scenarios,
        name=f"knapsack(n_y={n_y},t={t})",
        seed=seed,
        info={"gamma": gamma, "b": b, "scale": s, "a_bar": a_bar, "c_bar": c_bar},
    )


def reduce_set_cover(universe_size: int, subsets) -> FiniteInstance:
    """Min-max-min instance whose minimal k equals the minimum set cover size.

    One scenario per element ``v`` (objective ``-e_v``), one admissible
    policy per subset (its indicator vector), no uncertain constraints.
    Elements are ``0..universe_size-1``.
    """
    subsets = [sorted(set(S)) for S in subsets]
    if not subsets:
        raise ValueError("need at least one subset")
    covered = set()
    for S in subsets:
        if any(not 0 <= v < universe_size for v in S):
            raise ValueError(f"subset {S} not within 0..{universe_size - 1}")
        covered.update(S)
    if covered != set(range(universe_size)):
        missing = sorted(set(range(universe_size)) - covered)
        raise ValueError(f"subsets do not cover the universe; missing {missing}")
    points = [tuple(int(v in S) for v in range(universe_size)) for S in subsets]
    ys = YSpace((0,) * universe_size, (1,) * universe_size, explicit=points)
    scenarios = [
        Scenario([-1 if i == v else 0 for i in range(universe_size)]) for v in range(universe_size)
    ]
    return FiniteInstance(
        ys, scenarios, name=f"setcover(|V|={universe_size},|S|={len(subsets)})",
        info={"subsets": subsets},
    )


def simplex_units(n: int) -> FiniteInstance:
    """Unit-vector policies against the uniform-on-support points of the simplex.

    Scenarios are ``ξ^S`` with ``ξ_i = 1/|S|`` on every nonempty ``S ⊆ [n]``
    (ordered by size, then lexicographically); ``Y = {e_1, ..., e_n}``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scenarios, supports = [], []
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            scenarios.append(Scenario([Fraction(1, size) if i in S else 0 for i in range(n)]))
            supports.append(list(S))
    ys = YSpace.binary(n, [Constraint([1] * n, "=", 1)])
    return FiniteInstance(ys, scenarios, name=f"simplex-units({n})", info={"supports": supports})


def cardinality_band(n_y: int) -> FiniteInstance:
    """``Σy <= ξ <= Σy + 1`` sampled at the midpoints ``ξ = j - 1/2``.

    Each midpoint forces ``Σy = j - 1``; the objective is identically zero.
    """
    if n_y < 1:
        raise ValueError("n_y must be >= 1")
    ones = [1] * n_y
    scenarios = []
    for j in range(1, n_y + 1):
        xi = Fraction(2 * j - 1, 2)
        scenarios.append(Scenario([0] * n_y, [Constraint(ones, "<=", xi), Constraint(ones, ">=", xi - 1)]))
    return FiniteInstance(YSpace.binary(n_y), scenarios, name=f"cardinality-band({n_y})")


def cardinality_band_affine(n_y: int) -> AffineInstance:
    """Affine form of the cardinality band over ``U = [0, n_y]`` (one ξ coordinate).

    Row 1: ``ξ - Σy >= 0``.  Row 2: ``Σy + 1 - ξ >= 0``.
    """
    ones, neg = [1] * n_y, [-1] * n_y
    return AffineInstance(
        X=[()], y_space=YSpace.binary(n_y),
        A=[[], []], Ai=[[[], []]],
        B=[neg, ones], Bi=[[[0] * n_y, [0] * n_y]],
        H=[[-1], [1]], h=[0, -1],
        U=UBox([0], [n_y]),
        name=f"cardinality-band-affine({n_y})",
    )


def recourse_regions() -> AffineInstance:
    """Two binary variables, ``-y1 + ξ2 y2 <= ξ1`` and ``y1 + 3 y2 >= ξ2``.

    ``U = [3/2, 7/2] x [1/2, 2]``, no first stage.
    """
    return AffineInstance(
        X=[()], y_space=YSpace.binary(2),
        A=[[], []], Ai=[[[], []], [[], []]],
        B=[[1, 0], [1, 3]],
        Bi=[[[0, 0], [0, 0]], [[0, -1], [0, 0]]],
        H=[[-1, 0], [0, 1]], h=[0, 0],
        U=UBox([Fraction(3, 2), Fraction(1, 2)], [Fraction(7, 2), 2]),
        name="recourse-regions",
    )


_BUILTINS = {
    "simplex-units": simplex_units,
    "cardinality-band": cardinality_band,
    "cardinality-band-affine": cardinality_band_affine,
    "recourse-regions": recourse_regions,
}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def builtin_example(name: str, n: int | None = None):
    """Look up a built-in by ``"name"`` or ``"name(n)"``."""
    m = re.fullmatch(r"\s*([a-z\-]+)\s*(?:\(\s*(\d+)\s*\))?\s*", name)
    if not m or m.group(1) not in _BUILTINS:
        raise ValueError(f"unknown built-in {name!r}; choose from {builtin_names()}")
    key, arg = m.group(1), m.group(2)
    if arg is not None:
        n = int(arg)
    factory = _BUILTINS[key]
    if key == "recourse-regions":
        return factory()
    if n is None:
        raise ValueError(f"built-in {key!r} needs a size, e.g. {key}(3)")
    return factory(n)
