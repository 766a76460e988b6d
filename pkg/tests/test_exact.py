import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cfpgn.exact import (
    ZERO,
    LatticePoint,
    LogCoord,
    ParseError,
    exact_sqrt,
    logcoord_compare,
    logcoord_midpoint,
    rational_format,
    rational_parse,
)

positive = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6).filter(lambda x: x > 0)


@pytest.mark.parametrize(
    "text, value",
    [("3/7", Fraction(3, 7)), ("6/14", Fraction(3, 7)), ("-4/7", Fraction(-4, 7)),
     ("0", Fraction(0)), ("12", Fraction(12)), ("0.5", Fraction(1, 2)), (".25", Fraction(1, 4)),
     (" 355/113 ", Fraction(355, 113))],
)
def test_parse(text, value):
    assert rational_parse(text) == value


@pytest.mark.parametrize("text", ["1/0", "abc", "1e5", "nan", "inf", "1/2/3", "", "0.5.1", "1/-2"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        rational_parse(text)


@given(st.fractions())
def test_format_roundtrip(x):
    assert rational_parse(rational_format(x)) == x
    assert "/" in rational_format(x)


@given(positive, positive)
def test_logcoord_ordering_matches_float(a, b):
    A, B = LogCoord(a), LogCoord(b)
    assert logcoord_compare(A, B) == (a > b) - (a < b)
    if abs(math.log(a) - math.log(b)) > 1e-9:
        assert (A < B) == (A.to_float() < B.to_float())


@given(positive, positive)
def test_logcoord_add_sub(a, b):
    A, B = LogCoord(a), LogCoord(b)
    assert (A + B).to_float() == pytest.approx(A.to_float() + B.to_float(), abs=1e-9)
    assert (A + B) - B == A
    assert -(-A) == A
    assert (A + (-A)).is_zero()


def test_logcoord_rejects_nonpositive():
    with pytest.raises(ValueError):
        LogCoord(Fraction(0))
    with pytest.raises(ValueError):
        LogCoord(Fraction(-1))


def test_to_float_huge():
    big = LogCoord(Fraction(10**400, 3))
    assert big.to_float() == pytest.approx(0.5 * (400 * math.log(10) - math.log(3)))


@given(positive)
def test_json_roundtrip(a):
    A = LogCoord(a)
    assert LogCoord.from_json(A.to_json()) == A


def test_log_of():
    assert LogCoord.log_of(2) == LogCoord(Fraction(4))
    assert LogCoord.log_of(Fraction(1, 3)).to_float() == pytest.approx(-math.log(3))
    assert ZERO.is_zero()


@given(positive, positive)
def test_midpoint_strictly_between(a, b):
    A, B = LogCoord(a), LogCoord(b)
    M = logcoord_midpoint(A, B)
    if A == B:
        assert M == A
    else:
        assert min(A, B) < M < max(A, B)


@given(st.fractions(min_value=0, max_value=10**6))
def test_exact_sqrt(x):
    r = exact_sqrt(x * x)
    assert r == x


def test_exact_sqrt_irrational():
    with pytest.raises(ValueError):
        exact_sqrt(Fraction(2))


def test_lattice_point():
    x, y = LatticePoint(2, 1), LatticePoint(7, 3)
    assert x.det(y) == 2 * 3 - 1 * 7
    assert x.error(Fraction(3, 7)) == Fraction(1, 7)
    assert LatticePoint(-2, -1).normalized() == x
    assert LatticePoint(0, -1).normalized() == LatticePoint(0, 1)
    assert tuple(x) == (2, 1)
    assert x.to_json() == {"Q": "2", "P": "1"}
