"""Midpoint-radius ("ball") reals on top of MPFR.

A ball ``(mid, rad)`` stands for every real ``x`` with ``|x - mid| <= rad``.
Midpoints are rounded to nearest at the working precision; radii are kept at
a short fixed precision and every radius computation rounds upward, so the
ball of an operation always contains the exact result of that operation
applied to any members of the input balls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

RAD_PREC = 64

_EMIN = gmpy2.get_emin_min()
_EMAX = gmpy2.get_emax_max()


class InsufficientPrecision(ArithmeticError):
    """An error-tracked result came out wider than the caller allows."""


@lru_cache(maxsize=None)
def _near(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundToNearest, emin=_EMIN, emax=_EMAX)


@lru_cache(maxsize=None)
def _down(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown, emin=_EMIN, emax=_EMAX)


@lru_cache(maxsize=None)
def _up(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp, emin=_EMIN, emax=_EMAX)


_UP = gmpy2.context(precision=RAD_PREC, round=gmpy2.RoundUp, emin=_EMIN, emax=_EMAX)
_LO = gmpy2.context(precision=RAD_PREC, round=gmpy2.RoundDown, emin=_EMIN, emax=_EMAX)
_ZERO = mpfr(0)
_MPZ = type(mpz(0))


def _round_err(x: mpfr, prec: int) -> mpfr:
    # |exact - x| <= 2**-prec * |x| when x is the round-to-nearest image.
    if x == 0:
        return _ZERO
    return _UP.mul_2exp(_UP.abs(x), -prec)


def _sci(x: mpfr, ndigits: int, up: bool = False) -> str:
    """Scientific notation with ``ndigits`` significant digits (optionally bumped up)."""
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, ndigits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    if up:
        # nearest rounding is off by < 1 unit in the last digit
        bumped = str(int(mant) + 1)
        if len(bumped) > len(mant):
            exp += 1
        mant = bumped[:ndigits]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1}"


def _to_fraction(x: mpfr) -> Fraction:
    return Fraction(*x.as_integer_ratio())


@dataclass(frozen=True)
class ErrorTrackedReal:
    """Real number known to lie within ``rad`` of ``mid``."""

    mid: mpfr
    rad: mpfr

    def __post_init__(self):
        if self.rad < 0:
            raise ValueError("radius must be non-negative")

    # construction -------------------------------------------------------

    @classmethod
    def from_exact(cls, x, prec: int) -> ErrorTrackedReal:
        """Ball around an exact int or Fraction, rounded to ``prec`` bits."""
        ctx = _near(prec)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                mid = ctx.add(mpz(x.numerator), _ZERO)
            else:
                mid = ctx.div(mpz(x.numerator), mpz(x.denominator))
        else:
            mid = ctx.add(mpz(x), _ZERO)
        return cls(mid, _round_err(mid, prec))

    @property
    def precision(self) -> int:
        return self.mid.precision

    # inspection ---------------------------------------------------------

    def lower(self) -> mpfr:
        return _down(self.precision + 2).sub(self.mid, self.rad)

    def upper(self) -> mpfr:
        return _up(self.precision + 2).add(self.mid, self.rad)

    def lower_fraction(self) -> Fraction:
        return _to_fraction(self.lower())

    def upper_fraction(self) -> Fraction:
        return _to_fraction(self.upper())

    def contains(self, x) -> bool:
        """Exact membership test for an int, Fraction or mpfr."""
        if isinstance(x, mpfr):
            x = _to_fraction(x)
        x = Fraction(x)
        return abs(x - _to_fraction(self.mid)) <= _to_fraction(self.rad)

    def excludes_zero(self) -> bool:
        return self.lower() > 0 or self.upper() < 0

    def is_positive(self) -> bool:
        return self.lower() > 0

    def definitely_less_than(self, other: ErrorTrackedReal) -> bool:
        return self.upper() < other.lower()

    def require_radius(self, tol) -> ErrorTrackedReal:
        """Return self, or raise :class:`InsufficientPrecision` if ``rad > tol``."""
        if self.rad > tol:
            raise InsufficientPrecision(f"radius {float(self.rad):.3e} exceeds tolerance {float(tol):.3e}")
        return self

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"ErrorTrackedReal({float(self.mid):.17g} +/- {float(self.rad):.3e}, prec={self.precision})"

    def decimal_strings(self, digits: int | None = None) -> tuple[str, str]:
        """Midpoint and radius as decimal strings; the radius string is rounded up."""
        if digits is None:
            digits = max(17, int(self.precision * 0.30103) + 2)
        return _sci(self.mid, digits), _sci(self.rad, 4, up=True)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> ErrorTrackedReal:
        if isinstance(other, ErrorTrackedReal):
            return other
        if isinstance(other, (int, Fraction, _MPZ)):
            return ErrorTrackedReal.from_exact(other, max(self.precision, _bits(other)))
        if isinstance(other, float):
            return ErrorTrackedReal.from_exact(Fraction(other), self.precision)
        return NotImplemented

    def __neg__(self) -> ErrorTrackedReal:
        return ErrorTrackedReal(_near(self.precision).minus(self.mid), self.rad)

    def __abs__(self) -> ErrorTrackedReal:
        return ErrorTrackedReal(_near(self.precision).abs(self.mid), self.rad)

    def __add__(self, other) -> ErrorTrackedReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.precision, other.precision)
        mid = _near(prec).add(self.mid, other.mid)
        rad = _UP.add(_UP.add(self.rad, other.rad), _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)

    __radd__ = __add__

    def __sub__(self, other) -> ErrorTrackedReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> ErrorTrackedReal:
        return (-self) + other

    def __mul__(self, other) -> ErrorTrackedReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.precision, other.precision)
        mid = _near(prec).mul(self.mid, other.mid)
        rad = _UP.add(_UP.mul(_UP.abs(self.mid), other.rad), _UP.mul(_UP.abs(other.mid), self.rad))
        rad = _UP.add(rad, _UP.mul(self.rad, other.rad))
        rad = _UP.add(rad, _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ErrorTrackedReal:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.excludes_zero():
            raise ZeroDivisionError("divisor ball contains zero")
        prec = max(self.precision, other.precision)
        mid = _near(prec).div(self.mid, other.mid)
        bm = _near(other.precision).abs(other.mid)
        num = _UP.add(_UP.mul(self.rad, bm), _UP.mul(_UP.abs(self.mid), other.rad))
        den = _LO.mul(_LO.plus(bm), _LO.sub(bm, other.rad))
        rad = _UP.add(_UP.div(num, den), _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)

    def __rtruediv__(self, other) -> ErrorTrackedReal:
        return self._coerce(other) / self

    def __pow__(self, e: int) -> ErrorTrackedReal:
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = ErrorTrackedReal.from_exact(1, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # elementary functions -----------------------------------------------

    def exp(self) -> ErrorTrackedReal:
        prec = self.precision
        mid = _near(prec).exp(self.mid)
        # |e^x - e^m| <= e^m * expm1(r)
        rad = _UP.mul(_UP.exp(self.mid), _UP.expm1(self.rad))
        rad = _UP.add(rad, _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)

    def log(self) -> ErrorTrackedReal:
        if not self.is_positive():
            raise ValueError("log of a ball that is not strictly positive")
        prec = self.precision
        mid = _near(prec).log(self.mid)
        # log(m) - log(m - r) <= r / (m - r)
        rad = _UP.div(self.rad, _LO.sub(self.mid, self.rad))
        rad = _UP.add(rad, _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)

    def sqrt(self) -> ErrorTrackedReal:
        if self.lower() < 0:
            raise ValueError("sqrt of a ball reaching below zero")
        prec = self.precision
        mid = _near(prec).sqrt(self.mid)
        if self.mid == 0:
            rad = _UP.sqrt(self.rad)
        else:
            # |sqrt(x) - sqrt(m)| = |x - m| / (sqrt(x) + sqrt(m)) <= r / sqrt(m)
            rad = _UP.div(self.rad, _LO.sqrt(self.mid))
        rad = _UP.add(rad, _round_err(mid, prec))
        return ErrorTrackedReal(mid, rad)


def _bits(x) -> int:
    if isinstance(x, Fraction):
        return max(53, x.numerator.bit_length(), x.denominator.bit_length())
    return max(53, int(x).bit_length())


def ball(x, prec: int = 128) -> ErrorTrackedReal:
    """Shorthand for :meth:`ErrorTrackedReal.from_exact`."""
    if isinstance(x, float):
        x = Fraction(x)
    return ErrorTrackedReal.from_exact(x, prec)


def exp_rational(x, prec: int) -> ErrorTrackedReal:
    """Ball containing ``exp(x)`` for an exact rational ``x``."""
    x = Fraction(x)
    guard = 8 + max(1, abs(x).__ceil__()).bit_length()
    return ErrorTrackedReal.from_exact(x, prec + guard).exp()


def real_exp_fraction(j: int, n: int, precision_bits: int) -> ErrorTrackedReal:
    """Ball containing ``e**(j/n)`` with radius at most ``2**(4 - precision_bits) * e**(j/n)``."""
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    if n < 1:
        raise ValueError("n must be positive")
    return exp_rational(Fraction(j, n), precision_bits)


def log_int(m: int, prec: int = 128) -> ErrorTrackedReal:
    return ErrorTrackedReal.from_exact(m, max(prec, _bits(m))).log()


def from_interval(lo: Fraction, hi: Fraction, prec: int = 128) -> ErrorTrackedReal:
    """Smallest convenient ball enclosing the exact interval ``[lo, hi]``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if hi < lo:
        raise ValueError("empty interval")
    mid = _near(prec).div(mpz((lo + hi).numerator), mpz(2 * (lo + hi).denominator))
    m = _to_fraction(mid)
    gap = max(hi - m, m - lo)
    rad = _UP.div(mpz(gap.numerator), mpz(gap.denominator)) if gap else _ZERO
    return ErrorTrackedReal(mid, rad)
