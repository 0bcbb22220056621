"""Exact rational arithmetic: dense polynomials and truncated power series.

Coefficients are :class:`fractions.Fraction`, which keeps every value in
lowest terms with a positive denominator.  Large products are computed by
Kronecker substitution, so the inner loop is a single big-integer
multiplication done by GMP.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import gmpy2

ExactRational = Fraction

# Below this length schoolbook multiplication beats packing/unpacking.
_KRONECKER_CUTOFF = 24

_factorials: list[int] = [1]
_factorials_lock = threading.Lock()


def factorial(i: int) -> int:
    """Exact ``i!``, memoized up to the largest index requested so far."""
    if i < 0:
        raise ValueError(f"factorial of negative integer {i}")
    if i >= len(_factorials):
        with _factorials_lock:
            acc = _factorials[-1]
            for m in range(len(_factorials), i + 1):
                acc *= m
                _factorials.append(acc)
    return _factorials[i]


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _pack(coeffs: Sequence[int], width: int) -> gmpy2.mpz:
    """Evaluate a signed integer polynomial at ``2**width`` (width a multiple of 8)."""
    nbytes = width // 8
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(value: gmpy2.mpz, width: int, count: int) -> list[int]:
    """Inverse of :func:`_pack` using balanced digits in ``[-2**(w-1), 2**(w-1))``."""
    sign = 1
    if value < 0:
        sign, value = -1, -value
    nbytes = width // 8
    raw = int(value).to_bytes(nbytes * (count + 1), "little")
    half = 1 << (width - 1)
    full = 1 << width
    out = []
    carry = 0
    for i in range(count):
        d = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(sign * d)
    return out


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact product of two integer coefficient lists (index = power)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _KRONECKER_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(y) for y in b)
    bound = ma * mb * min(len(a), len(b))
    width = bound.bit_length() + 2
    width += -width % 8
    prod = _pack(a, width) * _pack(b, width)
    return _unpack(prod, width, len(a) + len(b) - 1)


def _common_denominator(coeffs: Iterable[Fraction]) -> int:
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return den


@dataclass(frozen=True)
class ExactPolynomial:
    """Dense univariate polynomial over the rationals.

    ``coeffs[i]`` is the coefficient of ``x**i``.  Trailing zeros are
    stripped on construction, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_integers(cls, ints: Sequence[int], denominator: int = 1) -> ExactPolynomial:
        return cls(Fraction(c, denominator) for c in ints)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> ExactPolynomial:
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        """Coefficients as ints; raises ``ValueError`` if any is non-integral."""
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def to_integer_poly(self) -> tuple[list[int], int]:
        """Return ``(ints, den)`` with ``self == ints / den`` and ``den > 0``."""
        den = _common_denominator(self.coeffs)
        return [c.numerator * (den // c.denominator) for c in self.coeffs], den

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        x = _as_fraction(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def value_at_one(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def __neg__(self) -> ExactPolynomial:
        return ExactPolynomial(-c for c in self.coeffs)

    def __add__(self, other: ExactPolynomial) -> ExactPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPolynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    def __sub__(self, other: ExactPolynomial) -> ExactPolynomial:
        return self + (-other)

    def scale(self, factor) -> ExactPolynomial:
        factor = _as_fraction(factor)
        return ExactPolynomial(c * factor for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, ExactPolynomial):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ExactPolynomial:
        if e < 0:
            raise ValueError("negative power")
        result = ExactPolynomial([1])
        base = self
        while e:
            if e & 1:
                result = poly_mul(result, base)
            e >>= 1
            if e:
                base = poly_mul(base, base)
        return result

    def __repr__(self) -> str:
        return f"ExactPolynomial({[str(c) for c in self.coeffs]})"


def poly_mul(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    """Exact product; the degrees add when both factors are nonzero."""
    if p.is_zero() or q.is_zero():
        return ExactPolynomial()
    a, da = p.to_integer_poly()
    b, db = q.to_integer_poly()
    return ExactPolynomial.from_integers(int_poly_mul(a, b), da * db)


def linear_power(root: Fraction, e: int) -> ExactPolynomial:
    """``(root - x)**e`` expanded by the binomial theorem."""
    root = _as_fraction(root)
    coeffs = []
    binom = 1
    for i in range(e + 1):
        coeffs.append(binom * root ** (e - i) * (-1) ** i)
        binom = binom * (e - i) // (i + 1)
    return ExactPolynomial(coeffs)


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known modulo ``t**(order + 1)``."""

    coeffs: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient list must have length order + 1")

    @classmethod
    def from_poly(cls, p: ExactPolynomial, order: int) -> TruncatedSeries:
        return cls(tuple(p.coeff(i) for i in range(order + 1)), order)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        order = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coeffs[i] - other.coeffs[i] for i in range(order + 1)), order
        )

    def mul_poly(self, p: ExactPolynomial) -> TruncatedSeries:
        """Product with a polynomial, truncated at this series' order."""
        out = [Fraction(0)] * (self.order + 1)
        for j, c in enumerate(p.coeffs[: self.order + 1]):
            if c:
                for i in range(self.order + 1 - j):
                    out[i + j] += c * self.coeffs[i]
        return TruncatedSeries(tuple(out), self.order)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def vanishes_through(self, m: int) -> bool:
        return all(c == 0 for c in self.coeffs[: m + 1])


def series_of_exp(alpha, order: int) -> TruncatedSeries:
    """``exp(alpha * t)`` truncated after ``t**order``: coefficients ``alpha**i / i!``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    alpha = _as_fraction(alpha)
    coeffs = [Fraction(1)]
    for i in range(1, order + 1):
        coeffs.append(coeffs[-1] * alpha / i)
    return TruncatedSeries(tuple(coeffs), order)
