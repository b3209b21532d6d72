"""Exact Fourier–Motzkin elimination for small systems of linear inequalities.

A row is ``(coefs, rhs, strict)`` meaning ``coefs·x >= rhs`` or, when
``strict``, ``coefs·x > rhs``.  Only meant for a handful of variables (the
arrangement code uses at most three); parallel rows are merged after every
elimination step to keep the systems small.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[tuple[Fraction, ...], Fraction, bool]


def row(coefs: Sequence, rhs, strict: bool = False) -> Row:
    return tuple(Fraction(c) for c in coefs), Fraction(rhs), bool(strict)


def _constant_ok(rhs: Fraction, strict: bool) -> bool:
    return rhs < 0 if strict else rhs <= 0


def _reduce(rows: list[Row]) -> list[Row] | None:
    """Merge parallel rows; ``None`` if a constant row is violated."""
    best: dict[tuple, tuple[Fraction, bool]] = {}
    for coefs, rhs, strict in rows:
        lead = next((c for c in coefs if c != 0), None)
        if lead is None:
            if not _constant_ok(rhs, strict):
                return None
            continue
        s = abs(lead)
        key = tuple(c / s for c in coefs)
        r = rhs / s
        old = best.get(key)
        if old is None or r > old[0] or (r == old[0] and strict and not old[1]):
            best[key] = (r, strict)
    return [(k, r, s) for k, (r, s) in best.items()]


def _eliminate_last(rows: list[Row]) -> list[Row]:
    pos, neg, out = [], [], []
    for coefs, rhs, strict in rows:
        c = coefs[-1]
        if c > 0:
            pos.append((coefs, rhs, strict))
        elif c < 0:
            neg.append((coefs, rhs, strict))
        else:
            out.append((coefs[:-1], rhs, strict))
    for pc, pr, ps in pos:
        a = pc[-1]
        for nc, nr, ns in neg:
            b = -nc[-1]
            coefs = tuple(p / a + q / b for p, q in zip(pc[:-1], nc[:-1]))
            out.append((coefs, pr / a + nr / b, ps or ns))
    return out


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    if lo is not None and hi is not None:
        return lo if lo == hi else (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


def solve(rows: Sequence[Row], n: int) -> tuple[Fraction, ...] | None:
    """A point satisfying every row, or ``None`` when the system is infeasible.

    Variables are eliminated from the last to the first; the witness is built
    by back-substitution, taking the midpoint of each bounded interval.
    """
    system = _reduce([(tuple(Fraction(c) for c in r[0]), Fraction(r[1]), bool(r[2])) for r in rows])
    if system is None:
        return None
    stages = [system]
    for _ in range(n):
        system = _reduce(_eliminate_last(system))
        if system is None:
            return None
        stages.append(system)
    # stages[n - j] has variables 0..j-1
    point: list[Fraction] = []
    for j in range(1, n + 1):
        lo = hi = None
        lo_s = hi_s = False
        for coefs, rhs, strict in stages[n - j]:
            a = coefs[j - 1]
            if a == 0:
                continue
            bound = (rhs - sum((c * v for c, v in zip(coefs, point)), Fraction(0))) / a
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
        point.append(_pick(lo, lo_s, hi, hi_s))
    return tuple(point)


def feasible(rows: Sequence[Row], n: int) -> bool:
    return solve(rows, n) is not None


def satisfies(rows: Sequence[Row], point: Sequence) -> bool:
    for coefs, rhs, strict in rows:
        v = sum((Fraction(c) * p for c, p in zip(coefs, point)), Fraction(0))
        if v < rhs or (strict and v == rhs):
            return False
    return True
