"""Exact rational helpers shared by every module.

Values live in the lattice Q ∪ {+inf}.  ``INF`` is ``math.inf``; ``Fraction``
compares correctly against it, so ``min``/``max``/sorting work unchanged.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

INF = math.inf

Number = int | Fraction


def parse_rational(value, field: str = "value") -> Fraction:
    """Parse an integer or a ``"p/q"`` string into a Fraction.

    Floats are refused: instance data must be exact.
    """
    if isinstance(value, bool):
        raise ValueError(f"{field}: boolean is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise ValueError(f"{field}: malformed rational {value!r}") from None
            if q == 0:
                raise ValueError(f"{field}: zero denominator in {value!r}")
            return Fraction(p, q)
        try:
            return Fraction(int(text))
        except ValueError:
            raise ValueError(f"{field}: malformed rational {value!r}") from None
    raise ValueError(f"{field}: expected integer or 'p/q' string, got {type(value).__name__}")


def format_rational(value) -> int | str:
    """JSON form of a rational: plain int when integral, else ``"p/q"``."""
    if value == INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def render(value, as_float: bool = False) -> str:
    """Human-readable rendering used by the CLI."""
    if value == INF:
        return "inf"
    if as_float:
        return repr(float(value))
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def frac_vector(values: Iterable, field: str = "vector") -> tuple[Fraction, ...]:
    return tuple(parse_rational(v, f"{field}[{i}]") for i, v in enumerate(values))


def frac_matrix(rows: Iterable[Iterable], field: str = "matrix") -> tuple[tuple[Fraction, ...], ...]:
    return tuple(frac_vector(r, f"{field}[{i}]") for i, r in enumerate(rows))


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def integer_row(coefs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    """Scale ``coefs·y >= rhs`` by the positive lcm of denominators."""
    scale = lcm_of_denominators([*coefs, rhs])
    return [int(c * scale) for c in coefs], int(rhs * scale)


def is_integral(values: Iterable) -> bool:
    return all(Fraction(v).denominator == 1 for v in values)
