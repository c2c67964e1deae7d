"""Shared fixtures: the six-map reference instance, classical two-map
interpolants, and a generator of random valid instances."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from recurdim import (
    RfifSpec,
    build_address_graph,
    build_partition,
    components,
    parse_spec,
    solve_rfif,
)
from recurdim.config import MapSpec, derive_affine
from recurdim.polynomials import Polynomial
from recurdim.solver import default_resolution

EXAMPLE_CFG = Path(__file__).resolve().parent.parent / "configs" / "example6.cfg"


@pytest.fixture(scope="session")
def example6_text() -> str:
    return EXAMPLE_CFG.read_text()


@pytest.fixture(scope="session")
def example6(example6_text) -> RfifSpec:
    return parse_spec(example6_text)


@pytest.fixture(scope="session")
def example6_components(example6):
    return components(build_address_graph(example6), example6)


@pytest.fixture(scope="session")
def example6_partitions(example6, example6_components):
    """Both pieces built to depth 10 (shared: this is the expensive part)."""
    return {
        c.index: build_partition(example6, c, 10) for c in example6_components
    }


@pytest.fixture(scope="session")
def example6_f(example6):
    Q = default_resolution(example6, 3)
    return solve_rfif(example6, Q=Q, tol=1e-10)


def make_spec(xs, ys, blocks) -> RfifSpec:
    """Assemble a spec from raw parts; blocks are (n, ell, r, orient, S, q)."""
    xs = [Fraction(x) for x in xs]
    maps = []
    for n, ell, r, orient, S, q in sorted(blocks):
        L = derive_affine(xs, n, ell, r, orient)
        maps.append(
            MapSpec(n=n, ell=ell, r=r, orientation=orient, L=L,
                    S=Polynomial(tuple(S)), q=Polynomial(tuple(q)))
        )
    return RfifSpec(nodes=tuple(zip(xs, [float(y) for y in ys])), maps=tuple(maps))


def affine_through(x1: Fraction, v1: Fraction, x2: Fraction, v2: Fraction):
    """Coefficients (c0, c1) of the affine function with f(x1)=v1, f(x2)=v2."""
    slope = (v2 - v1) / (x2 - x1)
    return (v1 - slope * x1, slope)


def derived_q(xs, ys, n, ell, r, orient, S: Polynomial):
    """The unique affine q making the map interpolate the nodes."""
    d_lo, d_hi = xs[ell], xs[r]
    y_lo, y_hi = ys[ell], ys[r]
    if orient > 0:
        targets = (ys[n - 1], ys[n])
    else:
        targets = (ys[n], ys[n - 1])
    v_lo = targets[0] - S.eval_exact(d_lo) * y_lo
    v_hi = targets[1] - S.eval_exact(d_hi) * y_hi
    return affine_through(d_lo, v_lo, d_hi, v_hi)


def classical_fif(s: Fraction = Fraction(4, 5)) -> RfifSpec:
    """Two-map constant-scaling interpolant of (0,0), (1/2,1), (1,0)."""
    xs = [Fraction(0), Fraction(1, 2), Fraction(1)]
    ys = [Fraction(0), Fraction(1), Fraction(0)]
    blocks = []
    for n in (1, 2):
        S = Polynomial((Fraction(s),))
        q = derived_q(xs, ys, n, 0, 2, 1, S)
        blocks.append((n, 0, 2, 1, (s,), q))
    return make_spec(xs, ys, blocks)


def flat_spec(N: int = 3) -> RfifSpec:
    """All S identically zero: f is the straight-line interpolant."""
    xs = [Fraction(i, N) for i in range(N + 1)]
    ys = [Fraction((i * 7) % 3, 3) for i in range(N + 1)]
    blocks = []
    for n in range(1, N + 1):
        ell, r = 0, N
        if r - ell < 2:
            raise ValueError("need N >= 2")
        S = Polynomial((Fraction(0),))
        q = derived_q(xs, ys, n, ell, r, 1, S)
        blocks.append((n, ell, r, 1, (0,), q))
    return make_spec(xs, ys, blocks)


def random_spec(rng, N: int | None = None) -> RfifSpec:
    """A random valid instance: uniform nodes, one global ratio T, affine S
    with sup|S| < 1, and the q forced by the interpolation constraints."""
    if N is None:
        N = int(rng.integers(3, 9))
    T = int(rng.choice([2, 3]))
    if T > N:
        T = 2
    xs = [Fraction(i, N) for i in range(N + 1)]
    ys = [Fraction(round(float(rng.uniform(0, 1)), 3)) for _ in range(N + 1)]
    blocks = []
    for n in range(1, N + 1):
        ell = int(rng.integers(0, N - T + 1))
        r = ell + T
        orient = 1 if rng.uniform() < 0.8 else -1
        d_lo, d_hi = xs[ell], xs[r]
        s_lo = Fraction(round(float(rng.uniform(-0.9, 0.9)), 3))
        s_hi = Fraction(round(float(rng.uniform(-0.9, 0.9)), 3))
        S = Polynomial(affine_through(d_lo, s_lo, d_hi, s_hi))
        q = derived_q(xs, ys, n, ell, r, orient, S)
        blocks.append((n, ell, r, orient, tuple(S.coeffs), q))
    return make_spec(xs, ys, blocks)
