from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinalg import DomainError, HalfInt, SqrtRational

twice = st.integers(min_value=-400, max_value=400)
radicands = st.fractions(min_value=0, max_denominator=10**6).filter(lambda f: f <= 10**6)


@pytest.mark.parametrize("text, value", [
    ("3/2", 3), ("1.5", 3), ("2", 4), ("0.5", 1), ("-1/2", -1), (" 5/2 ", 5), ("0", 0),
])
def test_halfint_parse(text, value):
    assert HalfInt.of(text).twice == value


@pytest.mark.parametrize("bad", ["1/3", "0.3", "abc", "", "1/0", float("nan"), True])
def test_halfint_rejects(bad):
    with pytest.raises(DomainError):
        HalfInt.of(bad)


@given(twice)
def test_halfint_string_round_trip(t):
    h = HalfInt(t)
    assert HalfInt.of(str(h)) == h
    assert HalfInt.of(float(h)) == h
    assert HalfInt.of(h.to_fraction()) == h


@given(twice, twice)
def test_halfint_arithmetic(a, b):
    x, y = HalfInt(a), HalfInt(b)
    assert (x + y).twice == a + b
    assert (x - y).twice == a - b
    assert (x + y - y) == x
    assert (x + y).is_integer == ((a + b) % 2 == 0)


def test_halfint_int_conversion():
    assert int(HalfInt.of(3)) == 3
    with pytest.raises(DomainError):
        int(HalfInt.of("1/2"))


def test_sqrt_rational_normalizes_zero():
    z = SqrtRational(1, Fraction(0))
    assert z.is_zero and z.sign == 0
    assert SqrtRational(0, Fraction(5)) == SqrtRational.zero()
    assert str(z) == "0"


def test_sqrt_rational_rejects_bad_parts():
    with pytest.raises(DomainError):
        SqrtRational(2, Fraction(1))
    with pytest.raises(DomainError):
        SqrtRational(1, Fraction(-1))


def test_sqrt_rational_str_and_float():
    x = SqrtRational(1, Fraction(1, 6))
    assert str(x) == "+sqrt(1/6)"
    assert str(-x) == "-sqrt(1/6)"
    assert float(x) == pytest.approx(0.4082482904638630, rel=1e-15)


def test_from_parts_carries_factor_sign():
    x = SqrtRational.from_parts(1, Fraction(2), Fraction(-3, 2))
    assert x.sign == -1
    assert x.radicand == Fraction(9, 2)
    assert SqrtRational.from_rational(Fraction(-2, 3)) == SqrtRational(-1, Fraction(4, 9))


@given(st.sampled_from([-1, 0, 1]), radicands, st.sampled_from([-1, 0, 1]), radicands)
def test_product_closure(s1, r1, s2, r2):
    a, b = SqrtRational(s1, r1), SqrtRational(s2, r2)
    p = a * b
    assert isinstance(p, SqrtRational)
    assert p.square() == a.square() * b.square()
    assert float(p) == pytest.approx(float(a) * float(b), rel=1e-14, abs=1e-300)


@given(st.sampled_from([-1, 1]), st.fractions(min_value=Fraction(1, 10**30),
                                               max_value=10**30, max_denominator=10**30))
def test_float_matches_high_precision(sign, rad):
    x = SqrtRational(sign, rad)
    with mpmath.workdps(50):
        ref = sign * mpmath.sqrt(mpmath.mpf(rad.numerator) / rad.denominator)
        assert abs(float(x) - ref) <= 1e-15 * abs(ref)
