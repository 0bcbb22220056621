from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emeasure.exact import (
    ExactPolynomial,
    TruncatedSeries,
    factorial,
    int_poly_mul,
    linear_power,
    poly_mul,
    series_of_exp,
)
from oracles import naive_poly_mul

ints = st.lists(st.integers(-10**30, 10**30), min_size=0, max_size=60)


@given(ints, ints)
@settings(max_examples=200, deadline=None)
def test_int_poly_mul_matches_schoolbook(a, b):
    got = int_poly_mul(a, b)
    want = naive_poly_mul(a, b)
    # naive strips trailing zeros
    while got and got[-1] == 0:
        got.pop()
    assert [Fraction(x) for x in got] == want


def test_kronecker_path_with_mixed_signs():
    a = [(-1) ** i * (i + 1) ** 20 for i in range(100)]
    b = [(-1) ** (i // 3) * 7 ** i for i in range(80)]
    assert [Fraction(x) for x in int_poly_mul(a, b)] == naive_poly_mul(a, b)


def test_zero_polynomial_normalization():
    z = ExactPolynomial([0, 0, 0])
    assert z.coeffs == () and z.degree == -1 and z.is_zero()
    assert poly_mul(z, ExactPolynomial([1, 2])).is_zero()


def test_degree_adds():
    p = ExactPolynomial([1, Fraction(1, 3), 2])
    q = ExactPolynomial([Fraction(-1, 7), 0, 0, 5])
    assert (p * q).degree == p.degree + q.degree


def test_linear_power_binomial():
    p = linear_power(Fraction(1, 2), 5)
    assert p(Fraction(1, 2)) == 0
    assert p(0) == Fraction(1, 32)
    assert p == ExactPolynomial([Fraction(1, 2), -1]) ** 5


def test_evaluation_and_value_at_one():
    p = ExactPolynomial([1, -2, Fraction(3, 4)])
    assert p(2) == 1 - 4 + 3
    assert p.value_at_one() == p(1)


def test_integer_coeffs_rejects_fractions():
    with pytest.raises(ValueError):
        ExactPolynomial([Fraction(1, 2)]).integer_coeffs()
    assert ExactPolynomial([3, -4]).integer_coeffs() == [3, -4]


def test_to_integer_poly_round_trip():
    p = ExactPolynomial([Fraction(1, 6), Fraction(-5, 4), 2])
    ints, den = p.to_integer_poly()
    assert ExactPolynomial.from_integers(ints, den) == p


def test_factorial_memo():
    assert factorial(0) == 1 and factorial(20) == 2432902008176640000
    with pytest.raises(ValueError):
        factorial(-1)


def test_series_of_exp_and_truncation():
    s = series_of_exp(Fraction(1, 2), 4)
    assert s.coeffs == (1, Fraction(1, 2), Fraction(1, 8), Fraction(1, 48), Fraction(1, 384))
    t = s.mul_poly(ExactPolynomial([1, -Fraction(1, 2)]))
    assert t.coeff(0) == 1 and t.coeff(1) == 0
    assert t.first_nonzero() == 0
    with pytest.raises(ValueError):
        TruncatedSeries((1, 2), 3)


def test_series_vanishes_through():
    s = TruncatedSeries((0, 0, 0, 5), 3)
    assert s.vanishes_through(2) and not s.vanishes_through(3)
    assert s.first_nonzero() == 3
