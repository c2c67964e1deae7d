"""Closed intervals with exact rational endpoints."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with Fraction endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @staticmethod
    def sorted(a: Fraction, b: Fraction) -> "Interval":
        return Interval(a, b) if a <= b else Interval(b, a)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_point(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def split(self, parts: int) -> list["Interval"]:
        step = self.length / parts
        return [Interval(self.lo + i * step, self.lo + (i + 1) * step) for i in range(parts)]

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"
