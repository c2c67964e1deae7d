from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recurdim import parse_spec, serialize_spec, validate_spec
from recurdim.config import AffineMap, ConfigError, derive_affine

from conftest import random_spec

MINI = """
[data]
x = [0, 1/2, 1]
y = [0, 1, 0]

[[map]]
n = 1
ell = 0
r = 2
orientation = "+"
S = [4/5]
q = [0, 1]

[[map]]
n = 2
ell = 0
r = 2
orientation = "+"
S = [4/5]
q = [1, -1]
"""


def test_parse_mini():
    spec = parse_spec(MINI)
    assert spec.N == 2
    assert spec.x(1) == Fraction(1, 2)
    assert spec.y(1) == 1.0
    m = spec.map(1)
    assert m.L.slope == Fraction(1, 2) and m.L.intercept == 0
    assert spec.map(2).L(Fraction(0)) == Fraction(1, 2)


def test_parse_example(example6):
    assert example6.N == 6
    assert example6.map(6).orientation == -1
    assert example6.map(6).L.slope == Fraction(-1, 2)
    assert example6.map(6).L.intercept == Fraction(4, 3)
    assert example6.domain(2).lo == Fraction(1, 6)
    assert example6.domain(2).hi == Fraction(2, 3)


def test_roundtrip(example6, example6_text):
    again = parse_spec(serialize_spec(example6))
    assert again == example6


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_roundtrip_random(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng)
    assert parse_spec(serialize_spec(spec)) == spec


@pytest.mark.parametrize(
    "mangle,fragment",
    [
        (lambda t: t.replace("x = [0, 1/2, 1]", "x = [0, 1/3, 1]"), "A1"),
        (lambda t: t.replace("S = [4/5]", "S = [6/5]", 1), "A2"),
        (lambda t: t.replace("q = [1, -1]", "q = [1, -1/2]"), "INTERP"),
    ],
)
def test_validation_codes(mangle, fragment):
    spec = parse_spec(mangle(MINI))
    report = validate_spec(spec)
    assert not report.passed
    assert any(v.code == fragment for v in report.violations)
    assert fragment in report.serialize()


def test_validation_passes():
    report = validate_spec(parse_spec(MINI))
    assert report.passed
    assert report.ratios == {1: 2}


@pytest.mark.parametrize(
    "mangle,message",
    [
        (lambda t: t.replace("[data]", "[stuff]"), "unknown section"),
        (lambda t: t.replace("n = 2", "n = 1"), "duplicate"),
        (lambda t: t.replace('orientation = "+"', 'orientation = "x"', 1), "orientation"),
        (lambda t: t.replace("r = 2", "r = 0", 1), "ell"),
        (lambda t: t.replace("S = [4/5]", "S = [4/0]", 1), "rational"),
        (lambda t: t.replace("y = [0, 1, 0]", "y = [0, 1]"), "entries"),
    ],
)
def test_parse_errors(mangle, message):
    with pytest.raises(ConfigError, match=message):
        parse_spec(mangle(MINI))


def test_error_carries_line_number():
    bad = MINI.replace("S = [4/5]", "S = 4/5", 1)
    with pytest.raises(ConfigError, match=r"line \d+"):
        parse_spec(bad)


def test_affine_map_roundtrip():
    L = derive_affine([Fraction(0), Fraction(1, 2), Fraction(1)], 1, 0, 2, -1)
    assert L.slope == Fraction(-1, 2)
    assert L(Fraction(0)) == Fraction(1, 2) and L(Fraction(1)) == Fraction(0)
    assert L.inverse(L(Fraction(1, 3))) == Fraction(1, 3)
    with pytest.raises(ValueError):
        AffineMap(Fraction(0), Fraction(1))
