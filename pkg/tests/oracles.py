"""Independent reference computations used only by the tests.

Each oracle takes the slow, obvious route so it shares no code path with
the package implementation it checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath


def naive_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    while out and out[-1] == 0:
        out.pop()
    return out


def naive_omega(n: int, ells) -> list[Fraction]:
    """prod (s/n - x)^{ell_s} by repeated multiplication by a linear factor."""
    coeffs = [Fraction(1)]
    for s, e in enumerate(ells):
        for _ in range(e):
            coeffs = naive_poly_mul(coeffs, [Fraction(s, n), Fraction(-1)])
    return coeffs


def naive_shifted_omega(n: int, ells, j: int) -> list[Fraction]:
    coeffs = [Fraction(1)]
    for s, e in enumerate(ells):
        for _ in range(e):
            coeffs = naive_poly_mul(coeffs, [Fraction(s - j, n), Fraction(-1)])
    return coeffs


def naive_remainder_coeffs(n: int, ells, j: int, order: int) -> list[Fraction]:
    """Coefficients of e^{(j/n) t} A_0(t) - A_j(t) through t^order, built from scratch."""
    L = sum(ells)
    om0 = naive_omega(n, ells)
    omj = naive_shifted_omega(n, ells, j)

    def laplace(om):
        c = [Fraction(0)] * (L + 1)
        for i, s in enumerate(om):
            c[L - i] = s * mpmath_factorial(i)
        return c

    a0, aj = laplace(om0), laplace(omj)
    alpha = Fraction(j, n)
    ex = [alpha ** m / mpmath_factorial(m) for m in range(order + 1)]
    out = []
    for m in range(order + 1):
        acc = sum((ex[m - i] * a0[i] for i in range(min(m, L) + 1)), Fraction(0))
        if m <= L:
            acc -= aj[m]
        out.append(acc)
    return out


def mpmath_factorial(i: int) -> int:
    r = 1
    for m in range(2, i + 1):
        r *= m
    return r


def fraction_determinant(matrix) -> Fraction:
    """Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in row] for row in matrix]
    size = len(a)
    det = Fraction(1)
    for p in range(size):
        piv = next((r for r in range(p, size) if a[r][p] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != p:
            a[p], a[piv] = a[piv], a[p]
            det = -det
        det *= a[p][p]
        for r in range(p + 1, size):
            f = a[r][p] / a[p][p]
            for c in range(p, size):
                a[r][c] -= f * a[p][c]
    return det


def naive_min_form(n: int, k: int, H: int, lambda0_bound: int | None = None, dps: int = 40):
    """Full enumeration of (lambda_0, ..., lambda_k) with mpmath; returns (value, vector).

    ``lambda_0`` ranges over ``|lambda_0| <= 3 (k+1) H`` unless a bound is given.
    Among equal values the vector with positive leading entry is reported.
    """
    B = 3 * (k + 1) * H if lambda0_bound is None else lambda0_bound
    with mpmath.workdps(dps):
        exps = [mpmath.exp(mpmath.mpf(i) / n) for i in range(1, k + 1)]
        best, arg = None, None
        for inner in itertools.product(range(-H, H + 1), repeat=k):
            S = mpmath.fsum(l * e for l, e in zip(inner, exps))
            for lam0 in range(-B, B + 1):
                if lam0 == 0 and not any(inner):
                    continue
                v = abs(S + lam0)
                if best is None or v < best:
                    best, arg = v, (lam0,) + inner
        # normalise sign: highest-index nonzero entry positive
        lead = next(x for x in reversed(arg) if x)
        if lead < 0:
            arg = tuple(-x for x in arg)
        return best, arg


def quad_upper_gamma(m: int, X, dps: int = 50):
    """int_X^inf e^{-x} x^m dx by mpmath quadrature."""
    with mpmath.workdps(dps):
        X = mpmath.mpf(X.numerator) / X.denominator if isinstance(X, Fraction) else mpmath.mpf(X)
        return mpmath.quad(lambda x: mpmath.exp(-x) * x ** m, [X, X + m + 10, mpmath.inf])


def raw_abs_product_max(roots, lo, hi, samples: int = 400_001):
    """Dense sampling of |prod (r - y)|; a lower estimate of the maximum."""
    import numpy as np

    ys = np.linspace(float(lo), float(hi), samples)
    vals = np.abs(np.prod(np.array([float(r) for r in roots])[:, None] - ys[None, :], axis=0))
    return float(vals.max())
