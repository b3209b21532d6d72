"""Scenario bitsets backed by Python ints (arbitrary width)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class CoverageSet:
    """Set of scenario indices ``0..width-1`` stored as an int bitmask."""

    bits: int
    width: int

    @classmethod
    def empty(cls, width: int) -> "CoverageSet":
        return cls(0, width)

    @classmethod
    def full(cls, width: int) -> "CoverageSet":
        return cls((1 << width) - 1, width)

    @classmethod
    def from_indices(cls, indices: Iterable[int], width: int) -> "CoverageSet":
        bits = 0
        for j in indices:
            if not 0 <= j < width:
                raise IndexError(f"scenario {j} outside 0..{width - 1}")
            bits |= 1 << j
        return cls(bits, width)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, j: int) -> bool:
        return bool(self.bits >> j & 1)

    def __iter__(self) -> Iterator[int]:
        bits, j = self.bits, 0
        while bits:
            if bits & 1:
                yield j
            bits >>= 1
            j += 1

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "CoverageSet"):
        if self.width != other.width:
            raise ValueError("coverage sets of different width")

    def __and__(self, other: "CoverageSet") -> "CoverageSet":
        self._check(other)
        return CoverageSet(self.bits & other.bits, self.width)

    def __or__(self, other: "CoverageSet") -> "CoverageSet":
        self._check(other)
        return CoverageSet(self.bits | other.bits, self.width)

    def __sub__(self, other: "CoverageSet") -> "CoverageSet":
        self._check(other)
        return CoverageSet(self.bits & ~other.bits, self.width)

    def issubset(self, other: "CoverageSet") -> bool:
        return self.bits & ~other.bits == 0

    def indices(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"CoverageSet({self.indices()}, width={self.width})"
