"""Instance representations and their validation.

Two kinds of instance are supported:

``FiniteInstance``
    a min-max-min problem over ``t`` explicit scenarios.  Scenario ``j``
    carries an objective vector ``c_j`` (value ``c_j·y``) and linear rows
    ``b·y (>=|<=|=) h`` that ``y`` must satisfy.

``AffineInstance``
    a two-stage system ``A(ξ)x + B(ξ)y >= h(ξ)`` whose data are affine in
    ``ξ``::

        h(ξ) = h + Hξ,  A(ξ) = A + Σ_i A^i ξ_i,  B(ξ) = B + Σ_i B^i ξ_i

    over a box uncertainty set with optional extra linear cuts, a finite
    first-stage set ``X`` and an affine objective
    ``g(y, ξ) = cost·y + Σ_i ξ_i cost_xi[i]·y``.

Scenario indices are 0-based throughout the library.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .rational import dot, frac_matrix, frac_vector, is_integral, parse_rational

SENSES = (">=", "<=", "=")


@dataclass(frozen=True)
class Constraint:
    """One linear row ``row·v  sense  rhs``."""

    row: tuple
    sense: str
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "row", frac_vector(self.row, "row"))
        object.__setattr__(self, "rhs", parse_rational(self.rhs, "rhs"))
        if self.sense not in SENSES:
            raise ValueError(f"unknown constraint sense {self.sense!r}")

    def ge_rows(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        """The row as one or two ``>=`` rows."""
        neg = tuple(-c for c in self.row)
        if self.sense == ">=":
            return [(self.row, self.rhs)]
        if self.sense == "<=":
            return [(neg, -self.rhs)]
        return [(self.row, self.rhs), (neg, -self.rhs)]

    def holds(self, v: Sequence) -> bool:
        lhs = dot(self.row, v)
        if self.sense == ">=":
            return lhs >= self.rhs
        if self.sense == "<=":
            return lhs <= self.rhs
        return lhs == self.rhs


def _constraints(items) -> tuple[Constraint, ...]:
    out = []
    for c in items:
        if isinstance(c, Constraint):
            out.append(c)
        else:
            row, sense, rhs = c
            out.append(Constraint(row, sense, rhs))
    return tuple(out)


@dataclass(frozen=True)
class YSpace:
    """Bounded integer second-stage set.

    Either a box ``lower <= y <= upper`` filtered by deterministic rows, or,
    when ``explicit`` is given, that finite list of points (still filtered by
    the rows and required to lie in the box).
    """

    lower: tuple
    upper: tuple
    constraints: tuple = ()
    explicit: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(int(v) for v in self.upper))
        object.__setattr__(self, "constraints", _constraints(self.constraints))
        if self.explicit is not None:
            seen = dict.fromkeys(tuple(int(v) for v in p) for p in self.explicit)
            object.__setattr__(self, "explicit", tuple(seen))

    @classmethod
    def binary(cls, n: int, constraints=()) -> "YSpace":
        return cls((0,) * n, (1,) * n, constraints)

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def box_size(self) -> int:
        return math.prod(max(0, u - l + 1) for l, u in zip(self.lower, self.upper))

    @property
    def size_hint(self) -> int:
        """Number of candidates enumerate() has to look at."""
        return len(self.explicit) if self.explicit is not None else self.box_size

    @property
    def is_plain_box(self) -> bool:
        return self.explicit is None and not self.constraints

    def ge_rows(self):
        return [r for c in self.constraints for r in c.ge_rows()]

    def in_box(self, y: Sequence) -> bool:
        return len(y) == self.n and all(l <= v <= u for v, l, u in zip(y, self.lower, self.upper))

    def __contains__(self, y) -> bool:
        y = tuple(y)
        if not self.in_box(y):
            return False
        if any(Fraction(v).denominator != 1 for v in y):
            return False
        if self.explicit is not None and tuple(int(v) for v in y) not in set(self.explicit):
            return False
        return all(c.holds(y) for c in self.constraints)

    def enumerate(self) -> Iterator[tuple[int, ...]]:
        """All members, lexicographically ordered for box mode."""
        if self.explicit is not None:
            candidates = (p for p in self.explicit if self.in_box(p))
        else:
            candidates = itertools.product(*(range(l, u + 1) for l, u in zip(self.lower, self.upper)))
        for y in candidates:
            if all(c.holds(y) for c in self.constraints):
                yield y


@dataclass(frozen=True)
class Scenario:
    objective: tuple
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", frac_vector(self.objective, "objective"))
        object.__setattr__(self, "constraints", _constraints(self.constraints))

    def value(self, y: Sequence) -> Fraction:
        return dot(self.objective, y)

    def feasible(self, y: Sequence) -> bool:
        return all(c.holds(y) for c in self.constraints)

    def ge_rows(self):
        return [r for c in self.constraints for r in c.ge_rows()]


@dataclass(frozen=True)
class FiniteInstance:
    """min over y^1..y^k of max_j min_{i feasible at j} c_j·y^i."""

    y_space: YSpace
    scenarios: tuple
    name: str = ""
    seed: int | None = None
    info: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))

    @property
    def n_y(self) -> int:
        return self.y_space.n

    @property
    def t(self) -> int:
        return len(self.scenarios)

    sense = "min"


@dataclass(frozen=True)
class UBox:
    """Box uncertainty set with optional extra linear cuts on ξ."""

    lower: tuple
    upper: tuple
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lower", frac_vector(self.lower, "U_box.lower"))
        object.__setattr__(self, "upper", frac_vector(self.upper, "U_box.upper"))
        object.__setattr__(self, "constraints", _constraints(self.constraints))

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, xi: Sequence) -> bool:
        return all(l <= v <= u for v, l, u in zip(xi, self.lower, self.upper)) and all(
            c.holds(xi) for c in self.constraints
        )


def _zeros(r: int, c: int):
    return tuple((Fraction(0),) * c for _ in range(r))


@dataclass(frozen=True)
class AffineInstance:
    X: tuple
    y_space: YSpace
    A: tuple
    Ai: tuple
    B: tuple
    Bi: tuple
    H: tuple
    h: tuple
    U: UBox
    cost: tuple = ()
    cost_xi: tuple = ()
    name: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("X", tuple(tuple(int(v) for v in x) for x in self.X))
        set_("A", frac_matrix(self.A, "A"))
        set_("Ai", tuple(frac_matrix(M, f"Ai[{i}]") for i, M in enumerate(self.Ai)))
        set_("B", frac_matrix(self.B, "B"))
        set_("Bi", tuple(frac_matrix(M, f"Bi[{i}]") for i, M in enumerate(self.Bi)))
        set_("H", frac_matrix(self.H, "H"))
        set_("h", frac_vector(self.h, "h"))
        n_y, n_xi = self.y_space.n, self.U.dim
        set_("cost", frac_vector(self.cost, "cost") if len(self.cost) else (Fraction(0),) * n_y)
        set_("cost_xi", frac_matrix(self.cost_xi, "cost_xi") if len(self.cost_xi) else _zeros(n_xi, n_y))

    @property
    def m(self) -> int:
        return len(self.h)

    @property
    def n_x(self) -> int:
        return len(self.A[0]) if self.A else 0

    @property
    def n_y(self) -> int:
        return self.y_space.n

    @property
    def n_xi(self) -> int:
        return self.U.dim

    @property
    def fixed_recourse(self) -> bool:
        return all(v == 0 for M in self.Bi for row in M for v in row)

    @property
    def objective_depends_on_xi(self) -> bool:
        return any(v != 0 for row in self.cost_xi for v in row)

    def row_plane(self, x: Sequence, y: Sequence, l: int) -> tuple[tuple[Fraction, ...], Fraction]:
        """Row ``l`` in the form ``a·ξ >= offset``.

        ``a_i = A^i_l·x + B^i_l·y - H_{l,i}`` and ``offset = h_l - A_l·x - B_l·y``.
        """
        normal = tuple(
            dot(self.Ai[i][l], x) + dot(self.Bi[i][l], y) - self.H[l][i] for i in range(self.n_xi)
        )
        offset = self.h[l] - dot(self.A[l], x) - dot(self.B[l], y)
        return normal, offset

    def planes(self, x, y):
        return [self.row_plane(x, y, l) for l in range(self.m)]

    def feasible_at(self, x, y, xi) -> bool:
        return all(dot(a, xi) >= off for a, off in self.planes(x, y))

    def objective(self, y, xi) -> Fraction:
        return dot(self.cost, y) + sum((xi[i] * dot(self.cost_xi[i], y) for i in range(self.n_xi)), Fraction(0))

    def scenario_at(self, x, xi) -> Scenario:
        """The finite scenario obtained by fixing ``x`` and ``ξ``."""
        xi = tuple(Fraction(v) for v in xi)
        rows = []
        for l in range(self.m):
            coefs = tuple(
                self.B[l][j] + sum((self.Bi[i][l][j] * xi[i] for i in range(self.n_xi)), Fraction(0))
                for j in range(self.n_y)
            )
            a_row = [
                self.A[l][j] + sum((self.Ai[i][l][j] * xi[i] for i in range(self.n_xi)), Fraction(0))
                for j in range(self.n_x)
            ]
            rhs = self.h[l] + dot(self.H[l], xi) - dot(a_row, x)
            rows.append(Constraint(coefs, ">=", rhs))
        obj = tuple(
            self.cost[j] + sum((xi[i] * self.cost_xi[i][j] for i in range(self.n_xi)), Fraction(0))
            for j in range(self.n_y)
        )
        return Scenario(obj, rows)


def _check_rows(out: list, rows, width: int, label: str):
    for i, c in enumerate(rows):
        if len(c.row) != width:
            out.append(f"{label}[{i}]: row length {len(c.row)} != {width}")


def _check_matrix(out: list, M, rows: int, cols: int, label: str):
    if len(M) != rows or any(len(r) != cols for r in M):
        out.append(f"{label}: expected {rows}x{cols} matrix")


def validate(instance) -> list[str]:
    """Report-style validation; an empty list means the instance is valid."""
    out: list[str] = []
    ys = instance.y_space
    if len(ys.lower) != len(ys.upper):
        out.append("y_space: lower/upper length mismatch")
    for i, (l, u) in enumerate(zip(ys.lower, ys.upper)):
        if l > u:
            out.append(f"y_space: lower[{i}]={l} > upper[{i}]={u}")
    _check_rows(out, ys.constraints, ys.n, "y_space.constraints")
    if ys.explicit is not None:
        for p in ys.explicit:
            if not ys.in_box(p):
                out.append(f"y_space.explicit: point {p} outside the box")
    if not out and next(ys.enumerate(), None) is None:
        out.append("y_space: Y is empty")

    if isinstance(instance, FiniteInstance):
        if instance.t == 0:
            out.append("scenarios: t = 0")
        for j, s in enumerate(instance.scenarios):
            if len(s.objective) != ys.n:
                out.append(f"scenarios[{j}].objective: length {len(s.objective)} != n_y={ys.n}")
            _check_rows(out, s.constraints, ys.n, f"scenarios[{j}].constraints")
        return out

    inst: AffineInstance = instance
    m, n_y, n_xi = inst.m, inst.n_y, inst.n_xi
    n_x = inst.n_x
    if m == 0:
        out.append("h: no constraint rows")
    if not inst.X:
        out.append("X: empty first-stage set")
    for x in inst.X:
        if len(x) != n_x:
            out.append(f"X: point {x} has length != n_x={n_x}")
    _check_matrix(out, inst.A, m, n_x, "A")
    _check_matrix(out, inst.B, m, n_y, "B")
    _check_matrix(out, inst.H, m, n_xi, "H")
    if len(inst.Ai) != n_xi:
        out.append(f"Ai: expected {n_xi} matrices")
    if len(inst.Bi) != n_xi:
        out.append(f"Bi: expected {n_xi} matrices")
    for i, M in enumerate(inst.Ai):
        _check_matrix(out, M, m, n_x, f"Ai[{i}]")
    for i, M in enumerate(inst.Bi):
        _check_matrix(out, M, m, n_y, f"Bi[{i}]")
    if len(inst.U.upper) != n_xi:
        out.append("U_box: lower/upper length mismatch")
    for i, (l, u) in enumerate(zip(inst.U.lower, inst.U.upper)):
        if l > u:
            out.append(f"U_box: lower[{i}] > upper[{i}]")
    _check_rows(out, inst.U.constraints, n_xi, "U_box.constraints")
    if len(inst.cost) != n_y:
        out.append("cost: length != n_y")
    _check_matrix(out, inst.cost_xi, n_xi, n_y, "cost_xi")
    data = [v for M in (inst.A, inst.B, inst.H, *inst.Ai, *inst.Bi) for r in M for v in r]
    if not is_integral(data) or not is_integral(inst.h):
        out.append("constraint data: matrices must be integer (scale rows first)")
    return out
