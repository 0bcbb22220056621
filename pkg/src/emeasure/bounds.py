"""Analytic estimates behind the transcendence measure of e^{1/n}.

Everything that can overflow is evaluated in log scale.  Functions whose
guarantee needs ``ell >= e^s`` or ``log H >= s e^s`` return a
:class:`Flagged` pair ``(value, hypothesis_satisfied)`` instead of refusing
to evaluate outside that range.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

from .ball import ErrorTrackedReal, ball, exp_rational
from .exact import factorial
from .maxima import MaxResult, maximize_abs_product

# Constants as printed; 0.17 is what the parameter chain uses, 0.174 is the
# variant printed in the statement of the summed-remainder lemma.
D_CONST = Fraction("0.17")
D_CONST_VARIANT = Fraction("0.174")

STIRLING_Q_CONST = Fraction("0.72")
Q_TAIL = Fraction("0.000003")
K2_Q_CONST = Fraction("3.377257")
K2_R_CONST = Fraction("0.64")

# Second-order constant d(k) in omega(k, H) for k <= 4.
D_TABLE = {2: 3.319, 3: 1.145, 4: 1.114}
THETA_TABLE = {2: 0.744754115, 3: 0.04386773, 4: 0.00075786, 5: 0.00000412, 6: 7.976e-9}
THETA_LARGE_K = 1e-8

# Upper bounds for max_{0<=y<=1} prod_{s=0}^{k} |s/n - y|.
C_TABLE = {
    (2, 2): Fraction("0.049"),
    (2, 3): Fraction(1, 16),
    (3, 3): Fraction(1, 81),
    (2, 4): Fraction("0.114"),
    (3, 4): Fraction("0.015"),
    (4, 4): Fraction("0.004"),
}


class Flagged(NamedTuple):
    value: float
    hypothesis_satisfied: bool


class BoundViolation(AssertionError):
    """A stated analytic inequality failed numerically."""


def _check_nk(n: int, k: int) -> None:
    if n < 2 or k < n:
        raise ValueError(f"need k >= n >= 2, got n={n}, k={k}")


# s, q, r --------------------------------------------------------------------


def s_func(n: int, k: int) -> float:
    """``(k+n) * log(k+n)**2``."""
    return (k + n) * math.log(k + n) ** 2


def ell_hypothesis(ell: float, n: int, k: int) -> bool:
    """``ell >= e^{s(n,k)}``, tested as ``log ell >= s``."""
    return math.log(ell) >= s_func(n, k)


def logH_threshold(n: int, k: int) -> float:
    s = s_func(n, k)
    return s * math.exp(s)


def logH_hypothesis(logH: float | None, n: int, k: int, loglogH: float | None = None) -> bool:
    """``log H >= s e^s``; compared in log scale so huge H are fine."""
    s = s_func(n, k)
    if loglogH is None:
        if logH <= 0:
            return False
        loglogH = math.log(logH)
    return loglogH >= math.log(s) + s


def q_func(ell: float, n: int, k: int) -> Flagged:
    """Log-scale bound on ``|A*_{u,0}(1)|``."""
    _check_nk(n, k)
    L = math.log(ell)
    if k == 2:
        val = 2 * ell * L + ell * (float(K2_Q_CONST) + 2 * math.log(n))
    else:
        val = ell * k * L + ell * (k * math.log(k) + k * math.log(n) + float(STIRLING_Q_CONST) * k + float(Q_TAIL))
    return Flagged(val, ell_hypothesis(ell, n, k))


def r_func(ell: float, n: int, k: int, d_const: Fraction = D_CONST) -> Flagged:
    """``r(ell)`` with ``sum_j |L*_{u,j}(1)| <= e^{-r(ell)}``."""
    _check_nk(n, k)
    L = math.log(ell)
    if k == 2:
        val = ell * L + float(K2_R_CONST) * ell
    else:
        val = ell * L - ell * (k * math.log(k) - 0.81 * k - math.log(n) + float(d_const))
    return Flagged(val, ell_hypothesis(ell, n, k))


# parameter chain -------------------------------------------------------------


_PARAM_NAMES = ("a", "b", "c", "d", "s", "B", "C", "D", "F", "v", "h1", "uFactor")


@dataclass(frozen=True)
class BoundParams:
    n: int
    k: int
    a: ErrorTrackedReal
    b: ErrorTrackedReal
    c: ErrorTrackedReal
    d: ErrorTrackedReal
    s: ErrorTrackedReal
    B: ErrorTrackedReal
    C: ErrorTrackedReal
    D: ErrorTrackedReal
    F: ErrorTrackedReal
    v: ErrorTrackedReal
    h1: ErrorTrackedReal
    uFactor: ErrorTrackedReal

    def floats(self) -> dict:
        return {name: float(getattr(self, name)) for name in _PARAM_NAMES}

    def to_dict(self) -> dict:
        out = {"n": self.n, "k": self.k}
        for name in _PARAM_NAMES:
            mid, rad = getattr(self, name).decimal_strings(25)
            out[name] = {"midpoint": mid, "radius": rad}
        return out


def bound_params(n: int, k: int, d_const: Fraction = D_CONST, prec: int = 128) -> BoundParams:
    """The scalar chain ``a, b, c, d -> B, C, D, F, v, h1, u``."""
    _check_nk(n, k)
    one = ball(1, prec)
    log_n = ball(n, prec).log()
    log_k = ball(k, prec).log()
    log_kn = ball(k + n, prec).log()
    s = (k + n) * log_kn * log_kn
    a = ball(k, prec)
    c = one
    if k == 2:
        b = ball(K2_Q_CONST, prec) + 2 * log_n
        d = ball(-K2_R_CONST, prec)
    else:
        b = k * log_k + k * log_n + ball(STIRLING_Q_CONST * k + Q_TAIL, prec)
        d = k * log_k - ball(Fraction("0.81") * k, prec) - log_n + ball(d_const, prec)
    B = b + a * d / c
    C = a
    D = a + b + a * (-s).exp()
    F = one / (2 * D.exp())
    v = c - d / s
    h1 = s.exp()
    u = one + s.log() / s
    params = BoundParams(n, k, a, b, c, d, s, B, C, D, F, v, h1, u)
    if not v.is_positive():
        raise BoundViolation(f"v not positive for n={n}, k={k}")
    if not (B.is_positive() and F.is_positive() and F.upper() < 1):
        raise BoundViolation(f"parameter chain out of range for n={n}, k={k}")
    return params


# z(y) and epsilon(H) -----------------------------------------------------------


def z_inverse(y: float) -> float:
    """The ``z >= 1`` with ``z log z = y``."""
    if y < 0:
        raise ValueError("z_inverse needs y >= 0")
    if y == 0:
        return 1.0
    lo, hi = 1.0, max(math.e, float(y))
    z = y / math.log(y) if y > math.e else 1.0 + y / 2
    z = min(max(z, lo), hi)
    tol = 1e-13 * max(1.0, y)
    for _ in range(200):
        g = z * math.log(z) - y
        if abs(g) <= tol:
            return z
        if g > 0:
            hi = z
        else:
            lo = z
        step = z - g / (math.log(z) + 1)
        z = step if lo < step < hi else (lo + hi) / 2
        if hi - lo <= 4 * math.ulp(hi):
            break
    return z


def epsilon_H(logH: float, params: BoundParams) -> Flagged:
    """``epsilon(H) = [B z(log 2H / v) + C log z(log 2H / v)] / log 2H``."""
    log2H = logH + math.log(2)
    B, C, v, s = float(params.B), float(params.C), float(params.v), float(params.s)
    z = z_inverse(log2H / v)
    val = (B * z + C * math.log(z)) / log2H
    # log 2H >= v h1 log h1 with h1 = e^s, compared in log scale
    ok = math.log(log2H) >= math.log(v) + s + math.log(s)
    return Flagged(val, ok)


# omega(k, H) and f -------------------------------------------------------------


def d_constant(k: int) -> float:
    if k < 2:
        raise ValueError("k must be at least 2")
    if k in D_TABLE:
        return D_TABLE[k]
    return 1 + 0.69 / (math.log(k) - 1)


def omega_coefficient(k: int) -> float:
    """``k^2 log k * d(k)``, the numerator of the second-order term."""
    return k * k * math.log(k) * d_constant(k)


def omega_theorem(k: int, logH: float | None = None, *, loglogH: float | None = None, n: int | None = None) -> Flagged:
    """``omega(k, H) = k + k^2 log k d(k) / log log H``.

    Either ``logH`` or ``loglogH`` may be given (the latter for H beyond
    floating range).  The hypothesis flag uses ``s(n, k)``; with ``n``
    omitted it uses ``n = k``, the largest admissible ``s``.
    """
    if loglogH is None:
        if logH is None:
            raise ValueError("give logH or loglogH")
        if logH <= 1:
            raise ValueError(f"log log H undefined or non-positive for log H = {logH}")
        loglogH = math.log(logH)
    elif loglogH <= 0:
        raise ValueError("log log H must be positive")
    val = k + omega_coefficient(k) / loglogH
    return Flagged(val, logH_hypothesis(None, n or k, k, loglogH=loglogH))


def theta(k: int) -> float:
    if k in THETA_TABLE:
        return THETA_TABLE[k]
    if k < 2:
        raise ValueError("k must be at least 2")
    return THETA_LARGE_K


def f_exact(n: int, k: int, theta_value: float | None = None, d_const: float = 0.17) -> float:
    """``u (B + theta) / (v k^2 log k)`` straight from the definitions (k >= 3)."""
    th = theta(k) if theta_value is None else theta_value
    s = s_func(n, k)
    lk = math.log(k)
    u = 1 + math.log(s) / s
    v = 1 - (k * lk - 0.81 * k - math.log(n) + d_const) / s
    B = k * lk + 0.89 * k + 0.000003 + k * k * lk - 0.81 * k * k
    return u * (B + th) / (v * k * k * lk)


def f_func(n: int, k: int, theta_value: float | None = None) -> float:
    """Simplified upper bound for :func:`f_exact` with the cross terms dropped."""
    if k < 3 or n > k:
        raise ValueError("f is defined for k >= 3 and n <= k")
    th = theta(k) if theta_value is None else theta_value
    lk = math.log(k)
    m = k + n
    lm = math.log(m)
    num = (
        1
        + 1 / k
        + 0.89 / (k * lk)
        + (0.000003 + th) / (k * k * lk)
        - 0.81 / lk
        + 1 / (m * lm)
        + 2 * math.log(lm) / (m * lm * lm)
    )
    den = 1 - k * lk / (m * lm * lm) + 0.81 * k / (m * lm * lm)
    return num / den


# maxima ---------------------------------------------------------------------


def c_small_max(n: int, k: int) -> MaxResult:
    """``max_{0<=y<=1} prod_{s=0}^{k} |s/n - y|``."""
    return maximize_abs_product([Fraction(s, n) for s in range(k + 1)], 0, 1)


def c_n_max(n: int) -> MaxResult:
    """``c(n) = max_{0<=y<=1} prod_{s=0}^{5} |s/n - y|``; at most 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    res = maximize_abs_product([Fraction(s, n) for s in range(6)], 0, 1)
    if res.upper > 1:
        raise BoundViolation(f"c({n}) exceeds 1")
    return res


def factors_bounded_by_one(n: int) -> bool:
    """Each ``|s/n - y|`` (s <= 5) is at most 1 on [0, 1]; holds for n >= 5."""
    return all(max(Fraction(s, n), 1 - Fraction(s, n)) <= 1 for s in range(6))


def c_k_const(k: int) -> float:
    """``c(k)``: 6 for k >= 3 and 3*sqrt(3) for k = 2."""
    return 3 * math.sqrt(3) if k == 2 else 6.0


def max_product_bound(n: int, k: int) -> float:
    """``k!/(6 n^{k+1})`` for k >= 3, ``2/(3 sqrt 3 n^3)`` for k = 2."""
    if k < 2 or n < 2:
        raise ValueError("need k >= 2 and n >= 2")
    return math.factorial(k) / (c_k_const(k) * n ** (k + 1))


def max_product_raw(n: int, k: int) -> MaxResult:
    """``max_{0<x<k/n} |x (1/n - x) ... (k/n - x)|`` by grid plus golden section."""
    return maximize_abs_product([Fraction(s, n) for s in range(k + 1)], 0, Fraction(k, n))


# tail integrals and the A_{u,0}(1) bound -----------------------------------------


def upper_gamma_int(m: int, X, prec: int = 256) -> ErrorTrackedReal:
    """``int_X^inf e^{-x} x^m dx = e^{-X} sum_{i<=m} m!/(m-i)! X^{m-i}`` (exact sum)."""
    X = Fraction(X)
    if m < 0:
        raise ValueError("m must be non-negative")
    total = Fraction(0)
    falling = 1
    power = X ** m
    for i in range(m + 1):
        total += falling * power
        falling *= m - i
        if X:
            power /= X
        else:
            power = Fraction(1) if i + 1 == m else Fraction(0)
    bits = max(prec, total.numerator.bit_length() - total.denominator.bit_length() + prec)
    return exp_rational(-X, bits) * total


def gamma_tail_series(c, k: int, ell: int, prec: int = 256) -> ErrorTrackedReal:
    """``int_{c ell (k+1)}^inf e^{-x} x^{ell(k+1)-1} dx`` via partial integration.

    Raises :class:`BoundViolation` if the value exceeds
    ``c/(c-1) e^{-c(k+1)ell} (c(k+1)ell)^{ell(k+1)-1}``.
    """
    c = Fraction(c)
    if c <= 1:
        raise ValueError("c must exceed 1")
    N = (k + 1) * ell
    if N < 1:
        raise ValueError("need (k+1)*ell >= 1")
    X = c * N
    val = upper_gamma_int(N - 1, X, prec)
    bound = gamma_tail_bound(c, k, ell, val.precision)
    if not val.upper() <= bound.upper():
        raise BoundViolation(f"tail integral above its bound for c={c}, k={k}, ell={ell}")
    return val


def gamma_tail_bound(c, k: int, ell: int, prec: int = 256) -> ErrorTrackedReal:
    c = Fraction(c)
    N = (k + 1) * ell
    X = c * N
    return exp_rational(-X, prec) * (X ** (N - 1) * c / (c - 1))


def a_u0_bound(k: int, ell: float) -> float:
    """Log of the bound on ``|A_{u,0}(1)|`` before normalization."""
    if k < 2:
        raise ValueError("k must be at least 2")
    N = (k + 1) * ell
    return math.log(4) + N * math.log(2) + (N - 1) * math.log(N) - N + 1


def i1_bound_log(k: int, ell: float) -> float:
    """Log of ``2(k+1)ell e^{-(k+1)ell+1} ((k+1)ell-1)^{(k+1)ell-1}``."""
    N = (k + 1) * ell
    return math.log(2 * N) - N + 1 + (N - 1) * math.log(N - 1)


def i1_integral(n: int, k: int, ell: int, prec: int = 256) -> ErrorTrackedReal:
    """``int_{k/n}^{2(k+1)ell} e^{-x} x^{(k+1)ell-1} dx``, exact up to the ball."""
    N = (k + 1) * ell
    return upper_gamma_int(N - 1, Fraction(k, n), prec) - upper_gamma_int(N - 1, 2 * N, prec)


def sum_L_bound(n: int, k: int, ell: float) -> float:
    """Log of ``(k!)^ell / (c(k)^{ell-1} (ell-1)!) n^{2-ell} e^{(k+1)/n}``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return (
        ell * math.lgamma(k + 1)
        - (ell - 1) * math.log(c_k_const(k))
        - math.lgamma(ell)
        + (2 - ell) * math.log(n)
        + (k + 1) / n
    )


def single_L_bound(n: int, k: int, ell: float, j: int) -> float:
    """Log of the per-``j`` bound on ``|L*_{u,j}(1)|``."""
    return (
        k * ell * math.log(n)
        + math.log(math.expm1(j / n))
        + ell * math.lgamma(k + 1)
        - math.lgamma(ell)
        - (ell - 1) * (math.log(c_k_const(k)) + (k + 1) * math.log(n))
        - k * math.log(n)
    )


# sampled verification of the proof chain at large ell ------------------------------


@dataclass(frozen=True)
class StepCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    needs_hypothesis: bool

    def to_dict(self) -> dict:
        return asdict(self)


def proof_step_checks(n: int, k: int, ell, d_const: Fraction = D_CONST) -> tuple[bool, list[StepCheck]]:
    """Evaluate each inequality used to reach ``q(ell)`` and ``r(ell)``.

    Returns ``(hypothesis_satisfied, checks)``.  Uses mpmath so that ``ell``
    up to ~1e12 loses nothing to cancellation.
    """
    _check_nk(n, k)
    with mpmath.workdps(40):
        l = mpmath.mpf(ell)
        log, lgam = mpmath.log, mpmath.loggamma
        s = (k + n) * log(k + n) ** 2
        hyp = bool(log(l) >= s)
        N = (k + 1) * l
        checks: list[tuple[str, object, object, bool]] = []

        def add(name, lhs, rhs, needs_hyp=False, strict=True):
            ok = lhs < rhs if strict else lhs <= rhs
            checks.append(StepCheck(name, float(lhs), float(rhs), bool(ok), needs_hyp))

        half_log_2pi = log(2 * mpmath.pi) / 2
        add("stirling_ell_lower", half_log_2pi + log(l) / 2 + l * log(l) - l + 1 / (12 * l + 1), lgam(l + 1))
        add("stirling_k_upper", lgam(k + 1), half_log_2pi + log(k) / 2 + k * log(k) - k + mpmath.mpf(1) / (12 * k))
        # A_{u,0}(1) lemma: the [0, k/n] piece is dominated by the tail shape
        tail_shape = N * log(2) - N + 1 + (N - 1) * log(N)
        if k >= 5:
            first = l * lgam(k + 1) - (k * l - 5 * (l - 1)) * log(n) - (l - 1) * log(120)
        else:
            cval = mpmath.mpf(float(C_TABLE[(n, k)])) if (n, k) in C_TABLE else mpmath.mpf(c_small_max(n, k).upper)
            first = lgam(k + 1) - k * log(n) + (l - 1) * log(cval)
        add("a_u0_first_term", first, tail_shape)
        add("a_u0_i1_i2_merge", log(2 * N + 2 ** (N - 1) * 2), log(3) + N * log(2), strict=False)
        au0 = log(4) + tail_shape
        if k >= 3:
            add("log_ratio_small", log(l) - log(l - 1), mpmath.mpf("0.000003"), needs_hyp=True)
            add("klogk_increment", (k + 1) * log(k + 1) - k * log(k), 1 + log(k + 1), strict=False)
            add("const_072", -k + (k + 1) * log(2) + 1 + log(k + 1), mpmath.mpf("0.72") * k)
            q = k * l * log(l) + l * (k * log(k) + k * log(n) + mpmath.mpf("0.72") * k + mpmath.mpf("0.000003"))
        else:
            add("log_ratio_small", log(l) - log(l - 1), mpmath.mpf("0.00046"), needs_hyp=True)
            q = 2 * l * log(l) + l * (mpmath.mpf("3.377257") + 2 * log(n))
        add("lower_order_negative", (-log(l) - log(k + 1) + log(l - 1) / 2 + log(4) - half_log_2pi) / l, 0)
        add("corollary_q", au0 - lgam(l) + k * l * log(n), q, needs_hyp=True, strict=False)
        ck = 3 * mpmath.sqrt(3) if k == 2 else mpmath.mpf(6)
        sumL = l * lgam(k + 1) - (l - 1) * log(ck) - lgam(l) + (2 - l) * log(n) + mpmath.mpf(k + 1) / n
        if k >= 3:
            add("const_088", log(6) - half_log_2pi - 1 / (12 * l + 1), mpmath.mpf("0.88"))
            add("const_016", half_log_2pi - log(6) + mpmath.mpf(1) / (12 * k) + 1, mpmath.mpf("0.16"))
            add("half_logk", log(k) / 2 - k, -mpmath.mpf("0.81") * k)
            add("small_terms", log(l) / 2 + 2 * log(n) + mpmath.mpf(k + 1) / n + mpmath.mpf("0.88"),
                mpmath.mpf("0.00004") * l, needs_hyp=True)
            minus_r = -l * log(l) + l * (k * log(k) - mpmath.mpf("0.81") * k - log(n) + mpmath.mpf(d_const.numerator) / d_const.denominator)
        else:
            minus_r = -l * log(l) - mpmath.mpf("0.64") * l
        add("sum_to_r", sumL, minus_r, needs_hyp=True, strict=False)
    return hyp, checks
