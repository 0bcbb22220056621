"""Exhaustive minimisation of |lambda_0 + lambda_1 e^{1/n} + ... + lambda_k e^{k/n}|.

Only the inner coefficients ``lambda_1..lambda_k`` are enumerated, with the
highest-index nonzero one positive (the form is odd under a global sign
flip).  For each inner tuple the best ``lambda_0`` is minus the nearest
integer to ``S = sum lambda_i e^{i/n}``, so the form value is the distance
from ``S`` to the integers.

A float64 pass with a rigorous error bound discards every tuple that cannot
be the minimum or the runner-up; the survivors are re-evaluated in ball
arithmetic, doubling the precision until the minimum ball excludes zero and
every other survivor.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .ball import ErrorTrackedReal, InsufficientPrecision, real_exp_fraction
from .bounds import omega_theorem, s_func

PRECISION_CEILING = 1 << 20


class PrecisionExhausted(InsufficientPrecision):
    """Separation still failed at the precision ceiling."""


def _check(n: int, k: int, H: int) -> None:
    if n < 2 or k < n:
        raise ValueError(f"need k >= n >= 2, got n={n}, k={k}")
    if H < 1:
        raise ValueError("H must be at least 1")


def initial_precision(k: int, H: int) -> int:
    return 64 + math.ceil(4 * k * math.log(H))


def tuples_scanned(k: int, H: int, lambda0_bounded: bool = False) -> int:
    """Inner tuples evaluated: half the nonzero box, plus the zero tuple when lambda_0 is bounded."""
    return ((2 * H + 1) ** k - 1) // 2 + (1 if lambda0_bounded else 0)


# float prefilter ---------------------------------------------------------------


def _float_error(n: int, k: int, H: int) -> float:
    # S is a dot product of <= k terms with |lambda_i| <= H; each e^{i/n} carries
    # one rounding and each product/sum one more.
    scale = H * sum(math.exp(i / n) for i in range(1, k + 1)) + 1.0
    return (2 * k + 4) * 2.0 ** -52 * scale


@lru_cache(maxsize=8)
def _lower_grid(m: int, H: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = np.arange(-H, H + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axes] * m), indexing="ij"), axis=-1)
    return grid.reshape(-1, m)


def _distance(S: np.ndarray, H: int, lambda0_bounded: bool) -> np.ndarray:
    near = np.rint(S)
    if lambda0_bounded:
        near = np.clip(near, -H, H)
    return np.abs(S - near)


def _scan_chunk(args) -> list[tuple[int, float, tuple[int, ...]]]:
    """Candidates ``(height, d_float, inner)`` from the slab with leading index m and value lead."""
    n, k, H, m, lead, lambda0_bounded, err = args
    e = np.array([math.exp(i / n) for i in range(1, k + 1)])
    lower = _lower_grid(m - 1, H)
    S = lower @ e[: m - 1] + lead * e[m - 1] if m > 1 else np.array([lead * e[0]])
    d = _distance(S, H, lambda0_bounded)
    height = np.maximum(np.abs(lower).max(axis=1) if m > 1 else np.zeros(1, dtype=np.int64), lead)
    order = np.lexsort((d, height))
    hs, ds = height[order], d[order]
    out = []
    starts = np.flatnonzero(np.r_[True, hs[1:] != hs[:-1]])
    ends = np.r_[starts[1:], len(hs)]
    for a, b in zip(starts, ends):
        d2 = ds[a + 1] if b - a > 1 else math.inf
        stop = a + int(np.searchsorted(ds[a:b], d2 + 2 * err, side="right"))
        for idx in order[a:stop]:
            inner = tuple(int(x) for x in lower[idx]) + (lead,) + (0,) * (k - m)
            out.append((int(height[idx]), float(d[idx]), inner))
    return out


def _chunks(n: int, k: int, H: int, lambda0_bounded: bool):
    err = _float_error(n, k, H)
    return [(n, k, H, m, lead, lambda0_bounded, err) for m in range(1, k + 1) for lead in range(1, H + 1)]


def scan_candidates(n: int, k: int, H: int, lambda0_bounded: bool = False, jobs: int = 1):
    """All float-prefilter survivors over ``max |lambda_i| <= H``, grouped by height."""
    chunks = _chunks(n, k, H, lambda0_bounded)
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_chunk, chunks, chunksize=max(1, len(chunks) // (4 * jobs))))
    else:
        parts = [_scan_chunk(c) for c in chunks]
    cands = [c for part in parts for c in part]
    if lambda0_bounded:
        # lambda = (1, 0, ..., 0) is admissible once lambda_0 is bounded; value 1
        cands.append((0, 1.0, (0,) * k))
    cands.sort(key=lambda c: (c[0], c[1], c[2]))
    return cands, _float_error(n, k, H)


def _select(cands, H: int, err: float):
    pool = [c for c in cands if c[0] <= H]
    ds = sorted(c[1] for c in pool)
    d2 = ds[1] if len(ds) > 1 else math.inf
    return [c for c in pool if c[1] <= d2 + 2 * err]


# ball verification ------------------------------------------------------------------


def _form_ball(inner, exps, H: int, lambda0_bounded: bool):
    S = exps[0] * 0
    for lam, e in zip(inner, exps):
        if lam:
            S = S + e * lam
    mid = S.mid
    best = None
    for c in sorted({int(math.floor(mid)), int(math.ceil(mid))}):
        if lambda0_bounded:
            c = max(-H, min(H, c))
        if not any(inner) and c == 0:
            c = -1  # zero inner tuple: lambda_0 = 1
        v = abs(S - c)
        if best is None or v.mid < best[0].mid:
            best = (v, -c)
    return best


def _verify(n: int, k: int, H: int, selected, precision_bits: int, lambda0_bounded: bool):
    prec = precision_bits
    while True:
        exps = [real_exp_fraction(i, n, prec) for i in range(1, k + 1)]
        vals = []
        for _, _, inner in selected:
            v, lam0 = _form_ball(inner, exps, H, lambda0_bounded)
            vals.append((v, (lam0,) + inner))
        vals.sort(key=lambda t: (t[0].mid, t[1]))
        best, argmin = vals[0]
        separated = best.excludes_zero() and all(best.definitely_less_than(v) for v, _ in vals[1:])
        if separated:
            return best, argmin, prec
        if prec >= PRECISION_CEILING:
            raise PrecisionExhausted(f"no separation at {prec} bits for n={n}, k={k}, H={H}")
        prec = min(2 * prec, PRECISION_CEILING)


# records ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateRecord:
    n: int
    k: int
    H: int
    min_value: ErrorTrackedReal
    argmin: tuple[int, ...]
    empirical_omega: float | None
    theorem_omega: float | None
    hypothesis_satisfied: bool
    tuples_scanned: int
    wall_time_ms: float = field(default=0.0, compare=False)
    lambda0_bounded: bool = False
    verdict: bool | None = None

    def to_dict(self) -> dict:
        mid, rad = self.min_value.decimal_strings(30)
        return {
            "n": self.n,
            "k": self.k,
            "H": self.H,
            "min_value": {
                "midpoint_decimal": mid,
                "radius_decimal": rad,
                "precision_bits": self.min_value.precision,
            },
            "argmin": list(self.argmin),
            "empirical_omega": self.empirical_omega,
            "theorem_omega": self.theorem_omega,
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "verdict": self.verdict,
            "lambda0_bounded": self.lambda0_bounded,
            "tuples_scanned": self.tuples_scanned,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _empirical(min_value: ErrorTrackedReal, H: int) -> float | None:
    if H < 3:
        return None
    return -math.log(float(min_value)) / math.log(H)


def _hypothesis(n: int, k: int, H: int) -> bool:
    # log H >= s e^s, i.e. log log H >= s + log s
    if H < 3:
        return False
    s = s_func(n, k)
    return math.log(math.log(H)) >= s + math.log(s)


def _record(n, k, H, cands, err, precision_bits, lambda0_bounded, t0) -> CertificateRecord:
    selected = _select(cands, H, err)
    prec = precision_bits or initial_precision(k, H)
    best, argmin, _ = _verify(n, k, H, selected, prec, lambda0_bounded)
    return CertificateRecord(
        n, k, H, best, argmin, _empirical(best, H), None, _hypothesis(n, k, H),
        tuples_scanned(k, H, lambda0_bounded), (time.perf_counter() - t0) * 1000, lambda0_bounded,
    )


def min_linear_form(n: int, k: int, H: int, precision_bits: int | None = None, *,
                    jobs: int = 1, lambda0_bounded: bool = False) -> CertificateRecord:
    """Certified minimum of the form over ``max_{i>=1} |lambda_i| <= H``."""
    _check(n, k, H)
    t0 = time.perf_counter()
    cands, err = scan_candidates(n, k, H, lambda0_bounded, jobs)
    return _record(n, k, H, cands, err, precision_bits, lambda0_bounded, t0)


def theorem_verdict(min_value: ErrorTrackedReal, omega: float, H: int) -> bool:
    """``min_value > H^{-omega}``, with the right side evaluated at 60 digits."""
    with mpmath.workdps(60):
        rhs = mpmath.exp(-mpmath.mpf(omega) * mpmath.log(H))
        lo = min_value.lower_fraction()
        return mpmath.mpf(lo.numerator) / lo.denominator > rhs


def _with_theorem(rec: CertificateRecord) -> CertificateRecord:
    om = omega_theorem(rec.k, math.log(rec.H), n=rec.n)
    return CertificateRecord(
        rec.n, rec.k, rec.H, rec.min_value, rec.argmin, rec.empirical_omega, om.value,
        om.hypothesis_satisfied, rec.tuples_scanned, rec.wall_time_ms, rec.lambda0_bounded,
        theorem_verdict(rec.min_value, om.value, rec.H),
    )


def certify_against_theorem(n: int, k: int, H: int, precision_bits: int | None = None, *,
                            jobs: int = 1, lambda0_bounded: bool = False) -> CertificateRecord:
    if H < 3:
        raise ValueError("H must be at least 3 so that log log H > 0")
    return _with_theorem(min_linear_form(n, k, H, precision_bits, jobs=jobs, lambda0_bounded=lambda0_bounded))


def empirical_omega_curve(n: int, k: int, H_list, precision_bits: int | None = None, *,
                          jobs: int = 1, lambda0_bounded: bool = False) -> list[CertificateRecord]:
    """One record per ``H``, all read off a single scan up to ``max(H_list)``."""
    H_list = list(H_list)
    if not H_list:
        return []
    if min(H_list) < 3:
        raise ValueError("all H must be at least 3")
    _check(n, k, max(H_list))
    t0 = time.perf_counter()
    Hmax = max(H_list)
    cands, err = scan_candidates(n, k, Hmax, lambda0_bounded, jobs)
    cache: dict[int, CertificateRecord] = {}
    out = []
    for H in H_list:
        if H not in cache:
            cache[H] = _with_theorem(_record(n, k, H, cands, err, precision_bits, lambda0_bounded, t0))
        out.append(cache[H])
    return out
