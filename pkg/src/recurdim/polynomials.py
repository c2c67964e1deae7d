"""Polynomials with exact rational coefficients: evaluation, range, total variation.

Degree is capped so that critical points can be isolated by plain
sign-change bisection of the derivative.  Affine and constant cases take an
exact path (Fraction arithmetic) so that range endpoints and variations come
out as the nearest binary64 of the true rational value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .intervals import Interval

MAX_DEGREE = 8

_ROOT_TOL = 1e-12


class DegreeCapError(ValueError):
    pass


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(str(c))


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with ascending coefficients, trailing coefficient nonzero."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        cs = tuple(_as_fraction(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            cs = (Fraction(0),)
        if len(cs) - 1 > MAX_DEGREE:
            raise DegreeCapError(f"degree {len(cs) - 1} exceeds cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (Fraction(0),)

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def eval_exact(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((Fraction(0),))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))


def _bisect_root(p: Polynomial, lo: float, hi: float) -> float:
    flo = p(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _ROOT_TOL:
            return mid
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_points(p: Polynomial, interval: Interval) -> list[float]:
    """Real roots of p' inside the interval, by sign-change bisection."""
    d = p.derivative()
    if d.degree < 1:
        return []
    a, b = float(interval.lo), float(interval.hi)
    if a == b:
        return []
    n = max(64, 128 * d.degree)
    xs = [a + (b - a) * i / n for i in range(n + 1)]
    vals = [d(x) for x in xs]
    roots: list[float] = []
    for i in range(n):
        if vals[i] == 0.0:
            roots.append(xs[i])
        elif (vals[i] < 0) != (vals[i + 1] < 0):
            roots.append(_bisect_root(d, xs[i], xs[i + 1]))
    if vals[-1] == 0.0:
        roots.append(xs[-1])
    return roots


def _breakpoints(p: Polynomial, interval: Interval) -> list[float]:
    pts = [float(interval.lo)] + critical_points(p, interval) + [float(interval.hi)]
    return sorted(set(pts))


def poly_range(p: Polynomial, interval: Interval) -> tuple[float, float]:
    """Exact range of p over the interval (binary64 of the exact value for
    degree <= 1; endpoint+critical-point evaluation otherwise)."""
    if p.degree <= 1:
        va = float(p.eval_exact(interval.lo))
        vb = float(p.eval_exact(interval.hi))
        return (min(va, vb), max(va, vb))
    vals = [p(x) for x in _breakpoints(p, interval)]
    return (min(vals), max(vals))


def abs_range(p: Polynomial, interval: Interval) -> tuple[float, float]:
    """Range of |p| over the interval, derived from the signed range."""
    lo, hi = poly_range(p, interval)
    if lo > 0:
        return (lo, hi)
    if hi < 0:
        return (-hi, -lo)
    return (0.0, max(-lo, hi))


def poly_variation(p: Polynomial, interval: Interval) -> float:
    """Total variation over the interval via monotone decomposition."""
    if p.degree <= 1:
        return abs(float(p.eval_exact(interval.hi) - p.eval_exact(interval.lo)))
    pts = _breakpoints(p, interval)
    vals = [p(x) for x in pts]
    return math.fsum(abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1))
