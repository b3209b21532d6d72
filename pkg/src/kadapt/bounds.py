"""Closed-form bounds on the number of second-stage policies.

Objective uncertainty: ``n_ξ + 1`` policies suffice and fewer policies cost at
most ``L·diam(Y)·ln(k/s)``.  Constraint uncertainty: the policy count is bounded
through the number ``η`` of distinct hyperplanes in ξ-space, the rank ``ω`` of
the ξ-coefficient matrix and the region count ``R = Σ_{i<=e} C(η, i)``.

O(·) statements are reported as the explicit finite expressions behind them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import AffineInstance, YSpace
from .rational import dot, format_rational, is_integral

ENUM_GUARD = 2**16
DIAM_ENUM_GUARD = 4096
FLOAT_SLACK = 1e-12


@dataclass
class BoundReport:
    name: str
    value: object
    assumptions: list = field(default_factory=list)
    formula_trace: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            return v

        return {
            "name": self.name,
            "value": conv(self.value),
            "assumptions": list(self.assumptions),
            "formula_trace": conv(self.formula_trace),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


# ---------------------------------------------------------------------------
# objective uncertainty


def objective_bound(n_xi: int) -> int:
    if n_xi < 1:
        raise ValueError("n_xi must be >= 1")
    return n_xi + 1


def _check_lipschitz(L, diam_Y):
    if L <= 0:
        raise ValueError("L must be > 0")
    if diam_Y < 0:
        raise ValueError("diam_Y must be >= 0")


def approx_gap(L: float, diam_Y: float, s: int, k: int) -> float:
    """Upper bound on ``opt(s) - opt(k)``."""
    _check_lipschitz(L, diam_Y)
    if not 1 <= s <= k:
        raise ValueError(f"need 1 <= s <= k, got s={s}, k={k}")
    return L * diam_Y * math.log(k / s)


def policies_for_alpha(L: float, diam_Y: float, n_xi: int, alpha: float) -> int:
    """Smallest ``k`` with guaranteed ``opt(k) <= opt(2RO) + alpha``."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    full = n_xi + 1
    C = L * diam_Y
    if C <= 0:
        return 1
    val = full * math.exp(-alpha / C)
    k = math.ceil(val * (1 - FLOAT_SLACK))
    return min(full, max(1, k))


def diam_report(ys: YSpace) -> tuple[float, bool]:
    """``(diam, exact)``; ``exact`` is False when only the box bound was affordable."""
    box = math.sqrt(sum((u - l) ** 2 for l, u in zip(ys.lower, ys.upper)))
    if ys.is_plain_box:
        return box, True
    if ys.size_hint > DIAM_ENUM_GUARD:
        return box, False
    pts = np.array(list(ys.enumerate()), dtype=np.int64)
    if len(pts) <= 1:
        return 0.0, True
    best = 0
    for p in pts:
        d = pts - p
        best = max(best, int((d * d).sum(axis=1).max()))
    return math.sqrt(best), True


def diam_of_yspace(ys: YSpace) -> float:
    return diam_report(ys)[0]


# ---------------------------------------------------------------------------
# η, ω and region counts


def _y_range(ys: YSpace, w, points=None) -> tuple[Fraction, Fraction]:
    """``(min, max)`` of ``w·y`` over Y (box split, or exact by enumeration)."""
    if points is not None:
        vals = [dot(w, p) for p in points]
        return min(vals), max(vals)
    lo = sum((min(c * l, c * u) for c, l, u in zip(w, ys.lower, ys.upper)), Fraction(0))
    hi = sum((max(c * l, c * u) for c, l, u in zip(w, ys.lower, ys.upper)), Fraction(0))
    return lo, hi


def _y_points(ys: YSpace):
    if ys.is_plain_box or ys.size_hint > ENUM_GUARD:
        return None
    return list(ys.enumerate())


def _x_range(X, w) -> tuple[Fraction, Fraction]:
    vals = [dot(w, x) for x in X] if X else [Fraction(0)]
    return min(vals), max(vals)


def _require_integer(instance: AffineInstance):
    data = [v for M in (instance.A, instance.B, instance.H, *instance.Ai, *instance.Bi) for r in M for v in r]
    if not is_integral(data) or not is_integral(instance.h):
        raise ValueError("constraint data must be integer (scale rows first)")


def eta_integer_trace(instance: AffineInstance, trim_rhs: bool = False) -> dict:
    _require_integer(instance)
    ys, X = instance.y_space, instance.X
    pts = _y_points(ys)
    m, n_xi = instance.m, instance.n_xi
    hi_v, lo_v = [], []
    for i in range(n_xi):
        his, los = [], []
        for l in range(m):
            xlo, xhi = _x_range(X, instance.Ai[i][l])
            ylo, yhi = _y_range(ys, instance.Bi[i][l], pts)
            his.append(xhi + yhi - instance.H[l][i])
            los.append(xlo + ylo - instance.H[l][i])
        hi_v.append(max(his))
        lo_v.append(min(los))
    his, los = [], []
    for l in range(m):
        xlo, xhi = _x_range(X, instance.A[l])
        ylo, yhi = _y_range(ys, instance.B[l], pts)
        his.append(instance.h[l] - xlo - ylo)
        los.append(instance.h[l] - xhi - yhi)
    v0_hi, v0_lo = max(his), min(los)
    trace = {"v_upper": [v0_hi, *hi_v], "v_lower": [v0_lo, *lo_v]}
    if trim_rhs:
        # rhs values outside every attainable lhs value a·ξ on U give no hyperplane in U
        lhs_lo = lhs_hi = Fraction(0)
        for i in range(n_xi):
            prods = [a * u for a in (lo_v[i], hi_v[i]) for u in (instance.U.lower[i], instance.U.upper[i])]
            lhs_lo += min(prods)
            lhs_hi += max(prods)
        v0_lo = max(v0_lo, Fraction(math.ceil(lhs_lo)))
        v0_hi = min(v0_hi, Fraction(math.floor(lhs_hi)))
        trace["lhs_range"] = [lhs_lo, lhs_hi]
        trace["v_upper"][0], trace["v_lower"][0] = v0_hi, v0_lo
    counts = [max(0, int(hi - lo) + 1) for hi, lo in zip(trace["v_upper"], trace["v_lower"])]
    trace["counts"] = counts
    trace["eta"] = max(1, math.prod(counts))
    return trace


def eta_integer_x(instance: AffineInstance, trim_rhs: bool = False) -> int:
    """Hyperplane-count bound for integer first-stage sets: ``∏_i (v̄_i - v_i + 1)``."""
    return eta_integer_trace(instance, trim_rhs)["eta"]


def eta_mixed_trace(instance: AffineInstance) -> dict:
    _require_integer(instance)
    ys = instance.y_space
    pts = _y_points(ys)
    betas = []
    for l in range(instance.m):
        lo, hi = _y_range(ys, instance.B[l], pts)
        row = [int(hi - lo) + 1]
        for i in range(instance.n_xi):
            lo, hi = _y_range(ys, instance.Bi[i][l], pts)
            row.append(int(hi - lo) + 1)
        betas.append(row)
    return {"beta": betas, "eta": max(1, sum(math.prod(r) for r in betas))}


def eta_mixed_x(instance: AffineInstance) -> int:
    """Hyperplane-count bound without integrality of x: ``Σ_l ∏_i β^i_l``."""
    return eta_mixed_trace(instance)["eta"]


def matrix_rank(M) -> int:
    """Exact rank by Gaussian elimination over the rationals."""
    rows = [[Fraction(v) for v in r] for r in M]
    if not rows:
        return 0
    rank, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][c] / p[c]
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], p)]
        rank += 1
    return rank


def xi_matrix(instance: AffineInstance, x) -> list[list[Fraction]]:
    """``A(x)``: entry ``(l, i)`` is ``A^i_l·x - H_{l,i}``."""
    return [
        [dot(instance.Ai[i][l], x) - instance.H[l][i] for i in range(instance.n_xi)]
        for l in range(instance.m)
    ]


def omega(instance: AffineInstance) -> int:
    """``max_x rank A(x)`` over the explicit first-stage list."""
    return max((matrix_rank(xi_matrix(instance, x)) for x in instance.X), default=0)


def region_count_bound(eta: int, rank: int) -> int:
    """``Σ_{i=0}^{rank} C(η, i)``: cells of an arrangement of η hyperplanes."""
    if eta < 1:
        raise ValueError("eta must be >= 1")
    if rank < 0:
        raise ValueError("rank must be >= 0")
    return sum(math.comb(eta, i) for i in range(rank + 1))


def _y_count(ys: YSpace) -> tuple[int, bool]:
    if ys.size_hint <= ENUM_GUARD:
        return sum(1 for _ in ys.enumerate()), True
    return ys.box_size, False


def constraint_k_bound(
    instance: AffineInstance,
    fixed_recourse: bool | None = None,
    objective_uncertain: bool | None = None,
    eta: int | None = None,
    trim_rhs: bool = False,
) -> BoundReport:
    """Policy-count bound under constraint uncertainty.

    ``fixed_recourse`` and ``objective_uncertain`` default to what the data
    show; claiming fixed recourse or a ξ-free objective that the data
    contradict is an error.  ``eta`` overrides the η bound (e.g. with an
    empirical hyperplane count).
    """
    if fixed_recourse is None:
        fixed_recourse = instance.fixed_recourse
    elif fixed_recourse and not instance.fixed_recourse:
        raise ValueError("fixed recourse claimed but some B^i is nonzero")
    if objective_uncertain is None:
        objective_uncertain = instance.objective_depends_on_xi
    elif not objective_uncertain and instance.objective_depends_on_xi:
        raise ValueError("objective claimed independent of ξ but cost_xi is nonzero")

    n_xi = instance.n_xi
    trace: dict = {"n_xi": n_xi}
    it = eta_integer_trace(instance, trim_rhs)
    mx = eta_mixed_trace(instance)
    trace["eta_integer"] = it["eta"]
    trace["eta_mixed"] = mx["eta"]
    assumptions = []
    if eta is None:
        eta = min(it["eta"], mx["eta"])
    else:
        if eta < 1:
            raise ValueError("eta must be >= 1")
        assumptions.append("η supplied by caller")
    trace["eta"] = eta
    if fixed_recourse:
        e = omega(instance)
        trace["omega"] = e
        assumptions.append("fixed recourse: exponent ω = max rank A(x)")
    else:
        e = n_xi
        assumptions.append("random recourse: exponent n_ξ")
    trace["exponent"] = e
    R = region_count_bound(eta, e)
    trace["R"] = R
    y_count, exact = _y_count(instance.y_space)
    trace["Y_count"] = y_count
    if not exact:
        assumptions.append("|Y| replaced by the box size")
    if objective_uncertain:
        k = min(R * (n_xi + 1), y_count)
        trace["formula"] = "min(R*(n_xi+1), |Y|)"
        assumptions.append("objective depends on ξ")
    else:
        k = min(R, y_count)
        trace["formula"] = "min(R, |Y|)"
        assumptions.append("objective independent of ξ")
    if trim_rhs:
        assumptions.append("rhs values outside the lhs range on U trimmed")
    return BoundReport("constraint_k_bound", k, assumptions, trace)


def constraint_approx_gap(L: float, diam_Y: float, n_xi: int, R: int, s: int) -> float:
    """Upper bound on ``opt(R·s) - opt(2RO)`` given a cover by ``R`` regions."""
    _check_lipschitz(L, diam_Y)
    if R < 1:
        raise ValueError("R must be >= 1")
    if not 1 <= s <= n_xi + 1:
        raise ValueError(f"need 1 <= s <= n_xi+1, got s={s}")
    return L * diam_Y * math.log((n_xi + 1) / s)


def facility_location_counts(customers: int, p: int = 5, d: int = 10) -> tuple[int, int]:
    """``(|J|^p d^p, p^|J|)``: policy bound versus |Y| for facility location."""
    return customers**p * d**p, p**customers
