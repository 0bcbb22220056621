"""Explicit simultaneous approximations to e^{1/n}, ..., e^{k/n}.

For exponents ``ell_0..ell_k`` and points ``alpha_s = s/n`` the auxiliary
polynomial is ``Omega(x) = prod_s (alpha_s - x)**ell_s = sum_i sigma_i x**i``.
Its Laplace transform gives

    A_0(t) = sum_i i! sigma_i t**(L - i)

and shifting the points by ``alpha_j`` gives ``A_j``; the remainders
``e^{alpha_j t} A_0(t) - A_j(t)`` vanish to order ``L + 1`` at ``t = 0``.

The row family ``ell^(u)`` (all entries ``ell`` except ``ell - 1`` at index
``u``) with the common factor ``n**(k*ell) / (ell-1)!`` yields integer
polynomials ``A*_{u,j}``.  Throughout, ``L = (k+1)*ell - 1``.

Internally every point is ``r/n`` with integer ``r``, so ``Omega`` is handled
as the integer polynomial ``prod (r - y)**ell_r`` in ``y = n x`` and rescaled
only at the API boundary.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .ball import ErrorTrackedReal, InsufficientPrecision, real_exp_fraction
from .exact import (
    ExactPolynomial,
    TruncatedSeries,
    factorial,
    int_poly_mul,
    series_of_exp,
)


class InputDomainError(ValueError):
    """Parameters outside ``k >= n >= 2``, ``ell >= 2``."""


class ConstructionContractError(RuntimeError):
    """An internal invariant of the construction failed (a bug, not bad input)."""


def check_domain(n: int, k: int, ell: int | None = None) -> None:
    if not (isinstance(n, int) and isinstance(k, int)) or n < 2 or k < n:
        raise InputDomainError(f"need k >= n >= 2, got n={n}, k={k}")
    if ell is not None and ell < 2:
        raise InputDomainError(f"need ell >= 2, got ell={ell}")


@dataclass(frozen=True)
class AlphaVector:
    n: int
    k: int

    def __post_init__(self):
        check_domain(self.n, self.k)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.n) for s in range(self.k + 1))

    @property
    def numerators(self) -> tuple[int, ...]:
        return tuple(range(self.k + 1))


@dataclass(frozen=True)
class BetaVector:
    """The points ``alpha_s - alpha_j``."""

    n: int
    k: int
    j: int

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s - self.j, self.n) for s in range(self.k + 1))

    @property
    def numerators(self) -> tuple[int, ...]:
        return tuple(s - self.j for s in range(self.k + 1))


def beta_vector(alpha: AlphaVector, j: int) -> BetaVector:
    if not 0 <= j <= alpha.k:
        raise IndexError(f"shift index {j} outside 0..{alpha.k}")
    return BetaVector(alpha.n, alpha.k, j)


@dataclass(frozen=True)
class ExponentVector:
    """``ell^(u)``: ``ell`` everywhere except ``ell - 1`` at index ``u``."""

    ell: int
    u: int
    k: int

    def __post_init__(self):
        if self.ell < 2:
            raise InputDomainError(f"need ell >= 2, got {self.ell}")
        if not 0 <= self.u <= self.k:
            raise InputDomainError(f"row index u={self.u} outside 0..{self.k}")

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(self.ell - 1 if s == self.u else self.ell for s in range(self.k + 1))

    @property
    def L(self) -> int:
        return (self.k + 1) * self.ell - 1

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return self.k + 1

    def __getitem__(self, s):
        return self.entries[s]


def _entries(ell) -> tuple[int, ...]:
    ells = tuple(ell.entries if isinstance(ell, ExponentVector) else ell)
    if any(e < 1 for e in ells):
        raise InputDomainError(f"exponents must be positive, got {ells}")
    return ells


# integer kernel -----------------------------------------------------------


def _int_linear_power(r: int, e: int) -> list[int]:
    """Coefficients of ``(r - y)**e``."""
    return [comb(e, i) * r ** (e - i) * (-1) ** i for i in range(e + 1)]


def _product_tree(polys: list[list[int]]) -> list[int]:
    while len(polys) > 1:
        nxt = [int_poly_mul(polys[i], polys[i + 1]) for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def omega_int(numerators: Sequence[int], ells: Sequence[int]) -> list[int]:
    """Coefficients ``c_i`` of ``prod_s (r_s - y)**ell_s`` (so ``sigma_i = c_i n**(i-L)``)."""
    return _product_tree([_int_linear_power(r, e) for r, e in zip(numerators, ells)])


def _points(alpha) -> tuple[int, tuple[int, ...]]:
    if isinstance(alpha, (AlphaVector, BetaVector)):
        return alpha.n, alpha.numerators
    # arbitrary rationals: put them over a common denominator
    pts = [Fraction(a) for a in alpha]
    den = lcm(*(p.denominator for p in pts))
    return den, tuple(int(p * den) for p in pts)


# public API ----------------------------------------------------------------


def omega_poly(alpha, ell) -> ExactPolynomial:
    """``Omega(x) = prod_s (alpha_s - x)**ell_s`` expanded; index = power of x."""
    ells = _entries(ell)
    n, nums = _points(alpha)
    if len(nums) != len(ells):
        raise ValueError("point and exponent vectors differ in length")
    c = omega_int(nums, ells)
    L = sum(ells)
    return ExactPolynomial(Fraction(ci * n ** i, n ** L) for i, ci in enumerate(c))


def sigma_closed_form(i: int, ell, alpha: AlphaVector) -> Fraction:
    """``sigma_i`` from the multinomial sum over ``ell_0 + i_1 + ... + i_k = i``.

    Independent of the product expansion; used as its cross-check.
    """
    ells = _entries(ell)
    L = sum(ells)
    if not 0 <= i <= L:
        raise ValueError(f"index {i} outside 0..{L}")
    n = alpha.n
    rest = i - ells[0]
    if rest < 0:
        return Fraction(0)
    total = 0
    for parts in _compositions(rest, ells[1:]):
        term = 1
        for r, (e, ir) in enumerate(zip(ells[1:], parts), start=1):
            term *= comb(e, ir) * r ** (e - ir)
        total += term
    return Fraction((-1) ** i * total, n ** (L - i))


def sigma_closed_form_all(ell, alpha: AlphaVector) -> list[Fraction]:
    """All ``sigma_i``, ``0 <= i <= L``, by one pass over the multinomial index set."""
    ells = _entries(ell)
    L = sum(ells)
    n = alpha.n
    acc = [0] * (L + 1)
    ranges = [range(e + 1) for e in ells[1:]]
    weights = [[comb(e, ir) * r ** (e - ir) for ir in range(e + 1)] for r, e in enumerate(ells[1:], start=1)]
    for parts in itertools.product(*ranges):
        term = 1
        for w, ir in zip(weights, parts):
            term *= w[ir]
        acc[ells[0] + sum(parts)] += term
    return [Fraction((-1) ** i * acc[i], n ** (L - i)) for i in range(L + 1)]


def _compositions(total: int, caps: Sequence[int]):
    if not caps:
        if total == 0:
            yield ()
        return
    head, tail = caps[0], caps[1:]
    room = sum(tail)
    for x in range(max(0, total - room), min(head, total) + 1):
        for rest in _compositions(total - x, tail):
            yield (x,) + rest


def _laplace(omega: ExactPolynomial, L: int) -> ExactPolynomial:
    """``sum_i i! sigma_i t**(L-i)`` from ``Omega``'s coefficients."""
    coeffs = [Fraction(0)] * (L + 1)
    for i, s in enumerate(omega.coeffs):
        if s:
            coeffs[L - i] = factorial(i) * s
    return ExactPolynomial(coeffs)


def a0_poly(ell, alpha: AlphaVector) -> ExactPolynomial:
    """``A_0(t)``; its degree is ``L - ell_0``."""
    ells = _entries(ell)
    return _laplace(omega_poly(alpha, ells), sum(ells))


def aj_poly(j: int, ell, alpha: AlphaVector) -> ExactPolynomial:
    """``A_j(t) = sum_i i! sigma_i(ell, beta^(j)) t**(L-i)``; degree ``L - ell_j``."""
    if not 1 <= j <= alpha.k:
        raise IndexError(f"j={j} outside 1..{alpha.k}")
    ells = _entries(ell)
    return _laplace(omega_poly(beta_vector(alpha, j), ells), sum(ells))


def norm_factor(n: int, k: int, ell: int) -> Fraction:
    """``n**(L-ell+1) / (ell-1)!`` with ``L - ell + 1 = k*ell``."""
    return Fraction(n ** (k * ell), factorial(ell - 1))


@dataclass(frozen=True)
class ApproximationSystem:
    """The normalized integer polynomials ``A*_{u,j}`` for fixed ``(n, k, ell)``.

    ``polys[u][0]`` is ``A*_{u,0}``; ``polys[u][j]`` for ``j >= 1`` is ``A*_{u,j}``.
    """

    alpha: AlphaVector
    ell: int
    polys: tuple[tuple[ExactPolynomial, ...], ...]
    norm_factor: Fraction
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.alpha.n

    @property
    def k(self) -> int:
        return self.alpha.k

    @property
    def L(self) -> int:
        return (self.k + 1) * self.ell - 1

    # alias matching the A* notation
    @property
    def A_star(self):
        return self.polys

    def matrix(self) -> list[list[int]]:
        """``M[u][j] = A*_{u,j}(1)``, row ``u``, column ``j`` with ``j = 0`` first."""
        if "matrix" not in self._cache:
            self._cache["matrix"] = [[int(p.value_at_one()) for p in row] for row in self.polys]
        return self._cache["matrix"]

    def determinant(self) -> int:
        if "det" not in self._cache:
            self._cache["det"] = bareiss_determinant(self.matrix())
        return self._cache["det"]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "L": self.L,
            "norm_factor": {
                "numerator": str(self.norm_factor.numerator),
                "denominator": str(self.norm_factor.denominator),
            },
            "polys": [[[str(c.numerator) for c in p.coeffs] for p in row] for row in self.polys],
            "matrix": [[str(v) for v in row] for row in self.matrix()],
            "determinant": str(self.determinant()),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _row_polys(n: int, k: int, ell: int, u: int) -> tuple[ExactPolynomial, ...]:
    alpha = AlphaVector(n, k)
    ev = ExponentVector(ell, u, k)
    factor = norm_factor(n, k, ell)
    row = [a0_poly(ev, alpha)] + [aj_poly(j, ev, alpha) for j in range(1, k + 1)]
    out = []
    for j, p in enumerate(row):
        q = p.scale(factor)
        if not q.is_integral():
            raise ConstructionContractError(
                f"A*_{{{u},{j}}} has a non-integral coefficient for n={n}, k={k}, ell={ell}"
            )
        expected_deg = ev.L - ev[j]
        if q.degree != expected_deg:
            raise ConstructionContractError(
                f"deg A*_{{{u},{j}}} = {q.degree}, expected {expected_deg} (n={n}, k={k}, ell={ell})"
            )
        out.append(q)
    return tuple(out)


def normalize_system(n: int, k: int, ell: int, jobs: int = 1) -> ApproximationSystem:
    """Build all ``(k+1) x (k+1)`` normalized polynomials and check integrality."""
    check_domain(n, k, ell)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda u: _row_polys(n, k, ell, u), range(k + 1)))
    else:
        rows = [_row_polys(n, k, ell, u) for u in range(k + 1)]
    return ApproximationSystem(AlphaVector(n, k), ell, tuple(rows), norm_factor(n, k, ell))


def values_at_one(n: int, k: int, ell: int) -> list[list[int]]:
    """``A*_{u,j}(1)`` for all ``u, j`` without materializing the polynomials.

    With ``sigma_i = c_i n**(i-L)`` the normalized value is
    ``sum_i c_i * i!/(ell-1)! * n**(i-ell+1)``, an integer sum because
    ``c_i = 0`` for ``i < ell - 1``.  This is the path used at large ``ell``.
    """
    check_domain(n, k, ell)
    out = []
    for u in range(k + 1):
        ells = ExponentVector(ell, u, k).entries
        row = []
        for j in range(k + 1):
            c = omega_int([s - j for s in range(k + 1)], ells)
            low = ell - 1
            if any(c[:low]):
                raise ConstructionContractError(f"Omega has a term below degree {low}")
            w = 1  # i!/(ell-1)! * n**(i-ell+1) at i = ell-1
            total = 0
            for i in range(low, len(c)):
                if i > low:
                    w *= i * n
                total += c[i] * w
            row.append(total)
        out.append(row)
    return out


def remainder_series(j: int, u: int, n: int, k: int, ell: int, order: int) -> TruncatedSeries:
    """``e^{alpha_j t} A_{u,0}(t) - A_{u,j}(t)`` modulo ``t**(order+1)``."""
    check_domain(n, k, ell)
    ev = ExponentVector(ell, u, k)
    if order < ev.L:
        raise ValueError(f"order {order} below L={ev.L}")
    alpha = AlphaVector(n, k)
    return series_remainder(a0_poly(ev, alpha), aj_poly(j, ev, alpha), Fraction(j, n), order)


def series_remainder(a0: ExactPolynomial, aj: ExactPolynomial, alpha_j, order: int) -> TruncatedSeries:
    """``e^{alpha_j t} a0(t) - aj(t)`` truncated at ``order``."""
    return series_of_exp(alpha_j, order).mul_poly(a0) - TruncatedSeries.from_poly(aj, order)


def remainder_from_values(
    a0_at_one: int, aj_at_one: int, j: int, n: int, precision_bits: int = 128, max_bits: int = 1 << 22
) -> ErrorTrackedReal:
    """Ball for ``e^{j/n} * A*_{u,0}(1) - A*_{u,j}(1)``; escalates precision until
    the radius is below a quarter of the midpoint's magnitude."""
    prec = precision_bits + max(abs(a0_at_one).bit_length(), abs(aj_at_one).bit_length())
    while prec <= max_bits:
        val = real_exp_fraction(j, n, prec) * a0_at_one - aj_at_one
        if val.excludes_zero() and val.rad * 4 < abs(val.mid):
            return val
        prec *= 2
    raise InsufficientPrecision(f"remainder for j={j} not resolved at {max_bits} bits")


def remainder_value(j: int, u: int, n: int, k: int, ell: int, precision_bits: int = 128) -> ErrorTrackedReal:
    """Ball containing ``L*_{u,j}(1)``, from exact polynomial values."""
    check_domain(n, k, ell)
    if not 1 <= j <= k:
        raise IndexError(f"j={j} outside 1..{k}")
    M = values_at_one(n, k, ell)
    return remainder_from_values(M[u][0], M[u][j], j, n, precision_bits)


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("matrix must be square")
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for p in range(size - 1):
        if a[p][p] == 0:
            swap = next((r for r in range(p + 1, size) if a[r][p] != 0), None)
            if swap is None:
                return 0
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for r in range(p + 1, size):
            for c in range(p + 1, size):
                a[r][c] = (a[r][c] * a[p][p] - a[r][p] * a[p][c]) // prev
        prev = a[p][p]
    return sign * a[-1][-1]


def system_determinant(system: ApproximationSystem) -> int:
    return system.determinant()
