"""Global maximum of |prod (r_s - y)| on an interval.

A dense grid locates every peak that could hold the global maximum; each is
then polished by golden-section search.  A bound on the second derivative
turns the grid spacing and the final bracket width into a certified upper
bound, so the result is an exact attained value plus a small enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .ball import ErrorTrackedReal, from_interval
from .exact import ExactPolynomial, linear_power, poly_mul

INV_PHI = (math.sqrt(5) - 1) / 2
GRID_POINTS = 100_001


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-13) -> tuple[float, float]:
    """Bracket ``[a, b]`` of width <= ``tol`` around a maximum of unimodal ``f``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        if c >= d:  # bracket collapsed to float resolution
            break
    return a, b


@dataclass(frozen=True)
class MaxResult:
    argmax: float
    attained: Fraction      # exact |P(argmax)|, a lower bound on the maximum
    upper: Fraction         # certified upper bound on the maximum
    value: ErrorTrackedReal  # ball enclosing [attained, upper]

    def __float__(self) -> float:
        return float(self.attained)


def product_poly(roots: Sequence[Fraction]) -> ExactPolynomial:
    p = ExactPolynomial([1])
    for r in roots:
        p = poly_mul(p, linear_power(Fraction(r), 1))
    return p


def _second_derivative_bound(p: ExactPolynomial, lo: float, hi: float) -> float:
    m = max(abs(lo), abs(hi), 1.0)
    return float(sum(abs(c) * i * (i - 1) * m ** max(i - 2, 0) for i, c in enumerate(p.coeffs) if i >= 2))


def maximize_abs_product(roots: Sequence, lo, hi, grid_points: int = GRID_POINTS, tol: float = 1e-13) -> MaxResult:
    """max over ``[lo, hi]`` of ``|prod_s (r_s - y)|``."""
    roots = [Fraction(r) for r in roots]
    lo_f, hi_f = float(lo), float(hi)
    p = product_poly(roots)
    r_arr = np.array([float(r) for r in roots])

    def f(y: float) -> float:
        return abs(float(np.prod(r_arr - y)))

    ys = np.linspace(lo_f, hi_f, grid_points)
    vals = np.abs(np.prod(r_arr[:, None] - ys[None, :], axis=0))
    h = (hi_f - lo_f) / (grid_points - 1)
    m2 = _second_derivative_bound(p, lo_f, hi_f)
    gridmax = float(vals.max())
    # near an interior maximiser |P| drops by at most m2*(h/2)^2/2 to the nearest node
    slack = m2 * h * h / 8 + 1e-12 * gridmax + 1e-300
    cand = np.flatnonzero(vals >= gridmax - slack)

    best_y, best_val = float(ys[int(vals.argmax())]), Fraction(0)
    width = 0.0
    # merge neighbouring candidate nodes into windows
    windows = []
    for idx in cand:
        a, b = max(lo_f, ys[idx] - h), min(hi_f, ys[idx] + h)
        if windows and a <= windows[-1][1]:
            windows[-1][1] = b
        else:
            windows.append([a, b])
    for a, b in windows:
        a2, b2 = golden_section_max(f, a, b, tol)
        width = max(width, b2 - a2)
        for y in ((a2 + b2) / 2, a, b):
            v = abs(p(Fraction(y)))
            if v > best_val:
                best_val, best_y = v, y
    upper = best_val + Fraction(m2 * width * width / 8) + Fraction(1e-15) * best_val
    return MaxResult(best_y, best_val, upper, from_interval(best_val, upper))
