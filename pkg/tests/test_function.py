import math
from fractions import Fraction

import numpy as np
import pytest

from recurdim import (
    Interval,
    build_address_graph,
    build_partition,
    check_recursion,
    components,
    oscillation_sum,
    oscillation_vector,
    solve_rfif,
    sup_bound,
    variation_certificate,
    xi_bound,
)
from recurdim.solver import ResolutionError, contraction_factor, xi_entry

from conftest import classical_fif, flat_spec


def test_solve_nodes(example6, example6_f):
    f = example6_f
    for i, (x, y) in enumerate(example6.nodes):
        assert f.values[f.grid_index(x)] == pytest.approx(y, abs=1e-9)
    assert f.sup_error <= 1e-9


def test_flat_spec_is_linear_interpolant():
    spec = flat_spec(3)
    f = solve_rfif(spec, Q=64, tol=1e-12)
    xs = np.array([float(spec.x(0) + g * f.h) for g in range(f.n_samples)])
    node_x = [float(x) for x, _ in spec.nodes]
    node_y = [y for _, y in spec.nodes]
    expect = np.interp(xs, node_x, node_y)
    assert np.max(np.abs(f.values - expect)) <= 1e-12
    assert f.sup_error == 0.0


def test_residual_random_grid_points(example6, example6_f):
    f = example6_f
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(1, 7):
        m = example6.map(n)
        D = example6.domain(n)
        lo = f.grid_index(D.lo)
        hi = f.grid_index(D.hi)
        T = int((D.hi - D.lo) / (example6.x(n) - example6.x(n - 1)))
        # stay on indices whose image under L_n is again a grid point
        for g in rng.integers(lo // T, hi // T + 1, size=200) * T:
            x = f.x0 + int(g) * f.h
            lhs = f.values[f.grid_index(m.L(x))]
            xf = float(x)
            rhs = m.S(xf) * f.values[int(g)] + m.q(xf)
            worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-6


def test_contraction_factor(example6):
    assert contraction_factor(example6) == pytest.approx(0.9)


def test_sup_bound_examples(example6):
    assert sup_bound(example6, (5, 6)) == pytest.approx(5.0, abs=1e-9)
    assert sup_bound(example6, (2, 3, 4)) == pytest.approx(10.0, abs=1e-9)
    spec = flat_spec(3)
    sup_q = max(
        abs(spec.map(n).q(float(x)))
        for n in (1, 2, 3)
        for x in (spec.domain(n).lo, spec.domain(n).hi)
    )
    assert sup_bound(spec) == pytest.approx(sup_q)


def test_sup_bound_dominates_solved_max(example6, example6_f):
    assert sup_bound(example6) >= float(np.max(np.abs(example6_f.values)))


def test_oscillation_trivial(example6_f):
    f = example6_f
    J = Interval(Fraction(0), Fraction(1, 3))
    flat = f.values.copy()
    f_const = f.__class__(x0=f.x0, h=f.h, Q=f.Q, values=np.zeros_like(flat), sup_error=0.0)
    assert oscillation_sum(f_const, 2, 3, J) == 0.0
    ramp = np.linspace(0.0, 2.0, f.n_samples)
    f_lin = f.__class__(x0=f.x0, h=f.h, Q=f.Q, values=ramp, sup_error=0.0)
    # slope 2 over [0,1/3]: total rise 2/3 at every depth, up to one
    # clipped grid step of rise at each off-grid piece boundary
    for p in (1, 2, 4):
        slack = 1e-12 + 4.0 * 2**p * float(f.h)
        got = oscillation_sum(f_lin, 2, p, J)
        assert 2 / 3 - slack <= got <= 2 / 3 + 1e-12


def test_oscillation_monotone_in_p(example6_f, example6):
    J = Interval(example6.x(4), example6.x(6))
    vals = [oscillation_sum(example6_f, 2, p, J) for p in range(1, 9)]
    for a, b in zip(vals, vals[1:]):
        assert b >= a - 1e-9


def test_oscillation_resolution_error(example6_f):
    with pytest.raises(ResolutionError):
        oscillation_sum(example6_f, 3, 12, Interval(Fraction(0), Fraction(1, 6)))


def test_oscillation_vector_norm(example6, example6_f, example6_partitions):
    part = example6_partitions[2]
    J = Interval(example6.x(4), example6.x(6))
    for p in (1, 3, 5):
        V, Vt = oscillation_vector(example6_f, part, 2, p)
        assert V.norm1() == pytest.approx(
            oscillation_sum(example6_f, 2, p + 2, J), abs=1e-9
        )
        assert Vt.norm1() == 0.0
        assert all(v >= 0 for v in V.entries.values())


def test_xi_examples(example6):
    assert xi_bound(example6, (5, 6), 5.0) == pytest.approx(52 / 15, abs=1e-12)
    spec = flat_spec(3)
    # constant S and the variation of affine q only
    base = xi_bound(spec, (1, 2, 3), 1.0)
    assert xi_bound(spec, (1, 2, 3), 2.0) == pytest.approx(base, abs=1e-12)
    const_spec = classical_fif(Fraction(1, 2))
    v1 = xi_bound(const_spec, (1, 2), 1.0)
    v2 = xi_bound(const_spec, (1, 2), 2.0)
    assert v1 == v2  # S constant: no S-variation term to scale


def test_xi_entry_positive(example6, example6_partitions):
    part = example6_partitions[2]
    for i in sorted(part.theta(2)):
        assert xi_entry(example6, part, 2, i, 5.0) >= 0.0


def test_certificate_example(example6, example6_f, example6_partitions):
    cert = variation_certificate(example6, example6_f, example6_partitions[2], 2, 10)
    assert cert.status == "certified_infinite"
    assert cert.column_min >= 6 / 5 - 1e-12
    assert cert.xi_norm <= 52 / 15 + 1e-9
    assert cert.threshold <= 52 / 3 + 1e-6
    assert cert.witness_p is not None and cert.witness_p <= 10
    assert cert.v_tilde_zero


def test_certificate_flat():
    spec = flat_spec(3)
    f = solve_rfif(spec, Q=729, tol=1e-10)
    comp = components(build_address_graph(spec), spec)[0]
    part = build_partition(spec, comp, 3)
    cert = variation_certificate(spec, f, part, 1, 6)
    assert cert.status == "refuted_finite"


def test_certificate_refutes_small_scaling():
    spec = classical_fif(Fraction(3, 10))
    f = solve_rfif(spec, Q=1024, tol=1e-10)
    comp = components(build_address_graph(spec), spec)[0]
    part = build_partition(spec, comp, 3)
    cert = variation_certificate(spec, f, part, 1, 6)
    # rho = 0.6 < 1 and nothing is dropped
    assert cert.status == "refuted_finite"
    assert cert.column_min == pytest.approx(0.6)


def test_check_recursion_example(example6, example6_f, example6_partitions):
    for p in range(1, 7):
        assert check_recursion(example6, example6_f, example6_partitions[2], 2, p)
    for p in range(1, 5):
        assert check_recursion(example6, example6_f, example6_partitions[1], 2, p)


def test_check_recursion_constant():
    spec = flat_spec(3)
    f = solve_rfif(spec, Q=729, tol=1e-10)
    flat = f.__class__(
        x0=f.x0, h=f.h, Q=f.Q, values=np.zeros_like(f.values), sup_error=0.0
    )
    comp = components(build_address_graph(spec), spec)[0]
    part = build_partition(spec, comp, 3)
    assert check_recursion(spec, flat, part, 1, 2)


def test_solve_errors(example6):
    with pytest.raises(ValueError):
        solve_rfif(example6, Q=0)
    with pytest.raises(ValueError):
        solve_rfif(example6, Q=10, tol=0.0)
