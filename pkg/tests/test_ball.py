from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emeasure.ball import (
    ErrorTrackedReal,
    InsufficientPrecision,
    ball,
    exp_rational,
    from_interval,
    log_int,
    real_exp_fraction,
)

fracs = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@given(fracs, fracs, st.integers(20, 300))
@settings(max_examples=300, deadline=None)
def test_arithmetic_contains_exact(a, b, prec):
    A, B = ball(a, prec), ball(b, prec)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0:
        assert (A / B).contains(a / b)
    assert (A ** 3).contains(a ** 3)
    assert (-A).contains(-a) and abs(A).contains(abs(a))


@given(st.fractions(min_value=-50, max_value=50, max_denominator=1000), st.integers(30, 400))
@settings(max_examples=200, deadline=None)
def test_exp_contains_mpmath(x, prec):
    b = exp_rational(x, prec)
    with mpmath.workdps(prec // 3 + 60):
        ref = mpmath.exp(_mp(x))
        assert abs(ref - mpmath.mpf(b.mid)) <= mpmath.mpf(b.rad)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**9, max_denominator=10**6), st.integers(30, 300))
@settings(max_examples=200, deadline=None)
def test_log_sqrt_contain_mpmath(x, prec):
    b = ball(x, prec)
    with mpmath.workdps(prec // 3 + 60):
        assert abs(mpmath.log(_mp(x)) - mpmath.mpf(b.log().mid)) <= mpmath.mpf(b.log().rad)
        assert abs(mpmath.sqrt(_mp(x)) - mpmath.mpf(b.sqrt().mid)) <= mpmath.mpf(b.sqrt().rad)


def test_real_exp_fraction_radius_and_domain():
    b = real_exp_fraction(1, 2, 200)
    assert float(b.rad) <= 2.0 ** (4 - 200) * float(b.mid)
    with mpmath.workdps(80):
        assert abs(mpmath.exp(mpmath.mpf(1) / 2) - mpmath.mpf(b.mid)) <= mpmath.mpf(b.rad)
    with pytest.raises(ValueError):
        real_exp_fraction(1, 2, 8)


def test_division_by_ball_containing_zero():
    with pytest.raises(ZeroDivisionError):
        ball(1) / from_interval(Fraction(-1, 10), Fraction(1, 10))


def test_require_radius():
    b = ball(Fraction(1, 3), 20)
    with pytest.raises(InsufficientPrecision):
        b.require_radius(1e-30)
    assert b.require_radius(1e-3) is b


def test_cancellation_keeps_containment():
    b = ball(Fraction(1, 3), 100)
    z = b - b
    assert z.contains(0)
    assert not z.excludes_zero()


def test_decimal_strings_radius_rounded_up():
    b = ball(Fraction(2, 3), 64)
    mid, rad = b.decimal_strings(20)
    assert Fraction(rad) >= Fraction(*b.rad.as_integer_ratio())
    assert mid.startswith("6.666")


def test_log_int_and_ordering():
    a, c = log_int(2), log_int(3)
    assert a.definitely_less_than(c)
    assert a.is_positive()
    assert isinstance(float(a), float)
