"""Hyperplane arrangements in ξ-space and their recourse-stable cells.

For a fixed first-stage ``x`` every second-stage ``y`` and constraint row ``l``
give an affine function ``a·ξ - b`` of the uncertain parameters.  The zero sets
meeting U form the arrangement; inside each open cell no row changes sign, so
the set of feasible ``y`` is constant there.  All geometry is exact (Fraction).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import fm
from .errors import GuardExceeded
from .model import AffineInstance, FiniteInstance, UBox
from .rational import dot, format_rational

MAX_NXI = 3
MAX_Y = 2**16
MAX_PLANES = 24


@dataclass(frozen=True)
class Hyperplane:
    """``normal·ξ = offset`` in canonical form (primitive integers, first nonzero normal entry > 0)."""

    normal: tuple
    offset: int
    provenance: tuple = field(default=(), compare=False)

    @staticmethod
    def canonical(normal: Sequence, offset) -> tuple[tuple[int, ...], int, int]:
        """``(normal, offset, sign)`` with ``sign`` = +1 if orientation was kept."""
        vals = [Fraction(v) for v in (*normal, offset)]
        den = math.lcm(*(v.denominator for v in vals))
        ints = [int(v * den) for v in vals]
        g = math.gcd(*ints) or 1
        ints = [v // g for v in ints]
        lead = next(v for v in ints[:-1] if v != 0)
        sign = 1 if lead > 0 else -1
        ints = [sign * v for v in ints]
        return tuple(ints[:-1]), ints[-1], sign

    def value(self, xi) -> Fraction:
        return dot(self.normal, xi) - self.offset

    def side(self, xi) -> int:
        v = self.value(xi)
        return (v > 0) - (v < 0)


@dataclass
class Region:
    """Open cell: ``sign_i·(normal_i·ξ - offset_i) > 0`` for every plane, inside U's interior."""

    planes: tuple
    signs: tuple
    witness: tuple
    feasible_set: list = field(default_factory=list)

    def rows(self) -> list:
        return [
            fm.row(tuple(s * a for a in p.normal), s * p.offset, True) for p, s in zip(self.planes, self.signs)
        ]

    def closure_contains(self, xi) -> bool:
        return all(s * p.value(xi) >= 0 for p, s in zip(self.planes, self.signs))

    def to_dict(self) -> dict:
        return {
            "signs": ["+" if s > 0 else "-" for s in self.signs],
            "witness": [format_rational(v) for v in self.witness],
            "feasible_set": [list(y) for y in self.feasible_set],
        }


def u_rows(U: UBox, strict: bool = False) -> list:
    """U as fm rows; ``strict`` gives its interior (box faces and cuts made strict)."""
    n = U.dim
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(fm.row(e, U.lower[i], strict))
        out.append(fm.row([-v for v in e], -U.upper[i], strict))
    for c in U.constraints:
        for w, r in c.ge_rows():
            out.append(fm.row(w, r, strict and c.sense != "="))
    return out


def _y_points(instance: AffineInstance) -> list:
    ys = instance.y_space
    if ys.size_hint > MAX_Y:
        raise GuardExceeded(f"|Y| candidates {ys.size_hint} exceed the arrangement guard {MAX_Y}")
    return list(ys.enumerate())


def _check_dim(n_xi: int):
    if n_xi > MAX_NXI:
        raise GuardExceeded(f"n_xi={n_xi} exceeds the arrangement guard {MAX_NXI}")


def hyperplanes_for(instance: AffineInstance, x) -> list[Hyperplane]:
    """Distinct hyperplanes ``a_l(x,y)·ξ = h_l(x,y)`` over ``y ∈ Y`` meeting U."""
    n = instance.n_xi
    _check_dim(n)
    x = tuple(x)
    U = instance.U
    box = u_rows(U)
    found: dict[tuple, list] = {}
    meets: dict[tuple, bool] = {}
    for y in _y_points(instance):
        for l in range(instance.m):
            normal, offset = instance.row_plane(x, y, l)
            if all(v == 0 for v in normal):
                continue
            a, b, _ = Hyperplane.canonical(normal, offset)
            key = (a, b)
            if key not in meets:
                eq = [fm.row(a, b), fm.row([-v for v in a], -b)]
                meets[key] = fm.feasible(eq + box, n)
            if meets[key]:
                found.setdefault(key, []).append((y, l))
    return [Hyperplane(a, b, tuple(prov)) for (a, b), prov in sorted(found.items())]


def enumerate_regions(planes: Sequence[Hyperplane], U: UBox, max_planes: int = MAX_PLANES) -> list[Region]:
    """Full-dimensional cells of the arrangement inside U, sorted by sign vector.

    Planes are added one at a time; a cell survives a split on the side of
    its witness for free and needs one exact feasibility check for the other.
    """
    n = U.dim
    _check_dim(n)
    if len(planes) > max_planes:
        raise GuardExceeded(f"{len(planes)} hyperplanes exceed the guard {max_planes}")
    interior = u_rows(U, strict=True)
    w0 = fm.solve(interior, n)
    if w0 is None:
        raise ValueError("U has empty interior")
    cells = [((), w0)]
    for k, p in enumerate(planes):
        nxt = []
        for signs, w in cells:
            side = p.side(w)
            for s in (1, -1):
                if s == side:
                    nxt.append((signs + (s,), w))
                    continue
                rows = interior + Region(tuple(planes[: k + 1]), signs + (s,), ()).rows()
                wit = fm.solve(rows, n)
                if wit is not None:
                    nxt.append((signs + (s,), wit))
        cells = nxt
    cells.sort(key=lambda c: tuple(-s for s in c[0]))
    return [Region(tuple(planes), signs, w) for signs, w in cells]


def feasible_set_at(instance: AffineInstance, x, xi, points=None) -> list:
    pts = _y_points(instance) if points is None else points
    return [y for y in pts if instance.feasible_at(x, y, xi)]


def sample_region(region: Region, U: UBox, rng: random.Random, count: int = 3) -> list:
    """Random rational points strictly inside the region (and U's interior).

    Each point moves from the witness along a random integer direction by a
    random fraction of the distance to the region boundary.
    """
    rows = u_rows(U, strict=True) + region.rows()
    n = len(region.witness)
    w = region.witness
    out = []
    while len(out) < count:
        d = [rng.randint(-5, 5) for _ in range(n)]
        if not any(d):
            continue
        step = None
        for coefs, rhs, _ in rows:
            rate = dot(coefs, d)
            if rate < 0:
                # distance until coefs·(w + τd) hits rhs
                lim = (dot(coefs, w) - rhs) / -rate
                step = lim if step is None else min(step, lim)
        if step is None or step <= 0:
            continue
        tau = step * Fraction(rng.randint(1, 99), 100)
        out.append(tuple(wi + tau * di for wi, di in zip(w, d)))
    return out


def feasible_set_on_region(
    instance: AffineInstance, x, region: Region, cross_check: bool = False, seed: int = 0
) -> list:
    """``Y_D(x)``: the ``y`` feasible at the witness (hence on the whole cell)."""
    pts = _y_points(instance)
    fs = feasible_set_at(instance, x, region.witness, pts)
    if cross_check:
        rng = random.Random(seed)
        for xi in sample_region(region, instance.U, rng, 3):
            if feasible_set_at(instance, x, xi, pts) != fs:
                raise AssertionError(f"feasible set changes inside region {region.signs} at {xi}")
    region.feasible_set = fs
    return fs


def verify_recourse_stability(instance: AffineInstance, x, region: Region) -> bool:
    """Exact check that every ``y`` is feasible on all of the cell or on none of it.

    A ``y`` feasible at the witness must have no row going negative anywhere
    in the cell; a ``y`` infeasible there must have no point of the cell
    satisfying all of its rows.  Both are exact infeasibility tests.
    """
    n = instance.n_xi
    base = u_rows(instance.U, strict=True) + region.rows()
    for y in _y_points(instance):
        planes = instance.planes(x, y)
        if instance.feasible_at(x, y, region.witness):
            for a, b in planes:
                if fm.feasible(base + [fm.row([-v for v in a], -b, True)], n):
                    return False
        elif fm.feasible(base + [fm.row(a, b) for a, b in planes], n):
            return False
    return True


def _vertices(planes: Sequence[Hyperplane], U: UBox) -> list:
    """Points of U where ``n_ξ`` independent planes or box faces meet."""
    n = U.dim
    faces = []
    for i in range(n):
        e = tuple(int(j == i) for j in range(n))
        faces += [(e, U.lower[i]), (e, U.upper[i])]
    lines = [(p.normal, Fraction(p.offset)) for p in planes] + faces
    out = set()
    for combo in itertools.combinations(lines, n):
        pt = _solve_square([a for a, _ in combo], [b for _, b in combo])
        if pt is not None and U.contains(pt):
            out.add(pt)
    return sorted(out)


def _solve_square(M, b):
    n = len(b)
    A = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [u - f * v for u, v in zip(A[r], A[c])]
    return tuple(A[i][n] / A[i][i] for i in range(n))


def cover_gaps(regions: Sequence[Region], planes: Sequence[Hyperplane], U: UBox, grid: int = 4) -> list:
    """Sample points of U (vertices and a grid incl. the boundary) in no region closure."""
    n = U.dim
    axes = [[l + (u - l) * Fraction(j, grid) for j in range(grid + 1)] for l, u in zip(U.lower, U.upper)]
    samples = set(itertools.product(*axes)) | set(_vertices(planes, U))
    return sorted(p for p in samples if U.contains(p) and not any(r.closure_contains(p) for r in regions)) if n else []


def regions_for(instance: AffineInstance, x, max_planes: int = MAX_PLANES) -> tuple[list, list]:
    """``(planes, regions)`` for ``x`` with feasible sets filled in."""
    planes = hyperplanes_for(instance, x)
    regions = enumerate_regions(planes, instance.U, max_planes)
    pts = _y_points(instance)
    for r in regions:
        r.feasible_set = feasible_set_at(instance, x, r.witness, pts)
    return planes, regions


def empirical_R(instance: AffineInstance, x) -> int:
    """Number of cells for ``x``; also asserts the closures cover U."""
    planes, regions = regions_for(instance, x)
    gaps = cover_gaps(regions, planes, instance.U)
    if gaps:
        raise AssertionError(f"region closures miss points of U, e.g. {gaps[0]}")
    return len(regions)


def empirical_eta(instance: AffineInstance) -> int:
    """``max(1, max_x |H(x)|)`` over the explicit first-stage list.

    Infeasible first-stage points are not filtered out, so this can exceed
    the count taken over feasible ``x`` only.
    """
    return max([1] + [len(hyperplanes_for(instance, x)) for x in instance.X])


def discretize(instance: AffineInstance, x, regions: Sequence[Region], extra: int = 0, seed: int = 0) -> FiniteInstance:
    """Finite instance with one scenario per region witness (plus ``extra`` samples each)."""
    rng = random.Random(seed)
    scenarios, points = [], []
    for r in regions:
        pts = [r.witness] + (sample_region(r, instance.U, rng, extra) if extra else [])
        for xi in pts:
            scenarios.append(instance.scenario_at(x, xi))
            points.append(xi)
    info = {"xi": [[format_rational(v) for v in p] for p in points]}
    return FiniteInstance(instance.y_space, scenarios, name=f"{instance.name}-discretized", info=info)


def regions_json(regions: Sequence[Region], planes: Sequence[Hyperplane] | None = None) -> str:
    doc = {"regions": [r.to_dict() for r in regions]}
    if planes is not None:
        doc["hyperplanes"] = [
            {"normal": list(p.normal), "offset": p.offset, "provenance": [[list(y), l] for y, l in p.provenance]}
            for p in planes
        ]
    return json.dumps(doc, indent=1)


def regions_csv(regions: Sequence[Region]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = len(regions[0].witness) if regions else 0
    w.writerow(["region", "signs", *[f"witness_{i}" for i in range(n)], "feasible_set"])
    for k, r in enumerate(regions):
        d = r.to_dict()
        w.writerow([k, "".join(d["signs"]), *d["witness"], " ".join("(" + ",".join(map(str, y)) + ")" for y in r.feasible_set)])
    return buf.getvalue()
