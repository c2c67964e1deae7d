import math
from fractions import Fraction

import numpy as np
import pytest

from recurdim import (
    Interval,
    analyze,
    box_count,
    d_star,
    empirical_dimension,
    k_star,
    solve_rfif,
)
from recurdim.dimension import oscillation_ladder
from recurdim.solver import ResolutionError, SampledRfif

from conftest import classical_fif, flat_spec


def _sampled(values, x0=Fraction(0), h=Fraction(1, 1024)):
    return SampledRfif(
        x0=x0, h=h, Q=1, values=np.asarray(values, dtype=float), sup_error=0.0
    )


def test_box_count_constant():
    f = _sampled(np.zeros(1025))
    assert box_count(f, Fraction(1, 4)).count == 4


def test_box_count_identity():
    f = _sampled(np.linspace(0.0, 1.0, 1025))
    assert box_count(f, Fraction(1, 2)).count == 2
    assert box_count(f, Fraction(1, 4)).count == 4


def test_box_count_resolution_guard():
    f = _sampled(np.zeros(1025))
    with pytest.raises(ResolutionError):
        box_count(f, Fraction(1, 1024))


def test_sandwich_example(example6, example6_f):
    J = Interval(example6.x(4), example6.x(6))
    length = float(J.hi - J.lo)
    for p, eps, count, osc in oscillation_ladder(example6_f, 2, J, 3, 9):
        assert count >= 0.5 * (osc + length) / eps - 1e-9
        assert count <= (osc + 2 * length) / eps + 1e-9
        assert count >= 2**p  # at least one box per column


def test_k_star_example(example6, example6_partitions):
    assert k_star(example6, example6_partitions[1], 6) == 1
    assert k_star(example6, example6_partitions[2], 6) == 1


def test_k_star_unverified_for_vanishing_scaling():
    from recurdim import build_address_graph, build_partition, components

    spec = flat_spec(3)
    comp = components(build_address_graph(spec), spec)[0]
    part = build_partition(spec, comp, 4)
    assert k_star(spec, part, 4) is None


def test_d_star_branches():
    assert d_star((1.6, 1.6), 2, "refuted_finite") == 1.0
    val = d_star((1.6, 1.6), 2, "certified_infinite")
    assert val == pytest.approx(1.0 + math.log(1.6) / math.log(2))
    wide = d_star((1.2, 1.5), 2, "certified_infinite")
    assert isinstance(wide, tuple) and wide[0] < wide[1]
    unknown = d_star((1.2, 1.5), 2, "unknown")
    assert unknown[0] == 1.0
    with pytest.raises(ValueError):
        d_star((1.5, 1.2), 2, "certified_infinite")


def test_classical_dimension():
    spec = classical_fif(Fraction(4, 5))
    report = analyze(spec, kmax=5, pmax=8, Q=8192, empirical=True)
    expect = 1.0 + math.log(1.6) / math.log(2)
    assert report.exact == pytest.approx(expect, abs=1e-6)
    assert report.upper_bound == pytest.approx(expect, abs=1e-6)
    slope, stderr = report.empirical
    assert slope == pytest.approx(expect, abs=0.06)


def test_flat_dimension():
    report = analyze(flat_spec(3), kmax=4, pmax=6, Q=729)
    assert report.exact == 1.0
    assert report.upper_bound == 1.0
    assert all(c.variation_status == "refuted_finite" for c in report.components)


def test_empirical_linear():
    spec = flat_spec(3)
    f = solve_rfif(spec, Q=2187, tol=1e-12)
    slope, _ = empirical_dimension(f, 3, Interval(Fraction(0), Fraction(1)), 2, 6)
    assert slope == pytest.approx(1.0, abs=0.03)


def test_empirical_needs_points(example6_f):
    with pytest.raises(ValueError, match="ladder"):
        empirical_dimension(example6_f, 2, Interval(Fraction(0), Fraction(1)), 3, 4)


def test_report_serialization():
    spec = classical_fif(Fraction(4, 5))
    report = analyze(spec, kmax=4, pmax=8, Q=4096)
    text = report.serialize()
    assert "upper_bound" in text and "exact" in text
    doc = report.to_dict()
    assert doc["exact"] == report.exact
    assert doc["components"][0]["T"] == 2
    assert doc["components"][0]["variation_status"] == "certified_infinite"


def test_exact_gated_by_certificates(example6, example6_components):
    # shallow pmax starves the certificate scan: report degrades to bounds
    report = analyze(example6, kmax=3, pmax=1, Q=4374)
    assert report.exact is None
    assert report.upper_bound >= 1.5
