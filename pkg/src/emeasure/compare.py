"""Side-by-side exponents: this construction, Mahler (1975) and EHLM.

Each exponent is the ``r`` in a lower bound ``|form| > H^{-r}`` for forms
whose inner coefficients satisfy ``H/2 <= |lambda_i| <= H``.  ``log H`` is
allowed to be astronomically large, so everything runs in mpmath and
Mahler's ``r`` is carried as ``log r``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import mpmath
from mpmath import mpf

from .bounds import omega_theorem

DPS = 60
LOG_R_CEILING = mpf(10) ** 9

COLUMNS = ("n", "k", "log_logH", "exp_paper", "exp_mahler", "exp_ehlm", "winner")

NOTES = {
    "exp_paper": "omega(k,H); guarantee needs log H >= s e^s",
    "exp_mahler": "Mahler 1975 with T >= (H/2)^k and max|x_i| = H",
    "exp_ehlm": "EHLM corollary with h_i >= H/2 and M = H",
}


class MahlerSearchExhausted(RuntimeError):
    pass


def _check_nk(n: int, k: int) -> None:
    if n < 2 or k < n:
        raise ValueError(f"need k >= n >= 2, got n={n}, k={k}")


def mahler_C(r, n: int, k: int):
    """``(k+1)^2 r sqrt(log(n+k+1) log r)``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    with mpmath.workdps(DPS):
        r = mpf(r)
        return (k + 1) ** 2 * r * mpmath.sqrt(mpmath.log(n + k + 1) * mpmath.log(r))


def _mahler_C_log_r(log_r, n: int, k: int):
    return (k + 1) ** 2 * mpmath.exp(log_r) * mpmath.sqrt(mpmath.log(n + k + 1) * log_r)


def _g_int(r: int, n: int, k: int):
    """``log r! - 2 C(r)`` at an integer ``r >= 1``."""
    if r == 1:
        return mpf(0)
    return mpmath.loggamma(r + 1) - 2 * _mahler_C_log_r(mpmath.log(r), n, k)


@dataclass(frozen=True)
class MahlerR:
    log_r: object          # mpf
    r: int | None          # exact integer when small enough to pin down
    method: str            # "sandwich" or "bracket_fallback"
    sandwich_log_r: object  # root of the factorial sandwich, even if rejected
    in_bracket: bool | None  # Mahler's bracket on the sandwich value; None if logx < e


def _sandwich_log_r(log_x, n: int, k: int):
    """``log`` of the smallest ``r`` with ``log r! - 2C(r) > log x`` on the rising branch."""
    ell = mpmath.log(n + k + 1)
    K = 2 * (k + 1) ** 2 * mpmath.sqrt(ell)

    def G(t):
        return mpmath.loggamma(mpmath.exp(t) + 1) - K * mpmath.exp(t) * mpmath.sqrt(t)

    def dG_sign(t):
        return mpmath.digamma(mpmath.exp(t) + 1) - K * (mpmath.sqrt(t) + 1 / (2 * mpmath.sqrt(t)))

    lo, hi = mpf("1e-6"), 4 * (k + 1) ** 4 * ell + 10
    while dG_sign(hi) <= 0:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if dG_sign(mid) > 0:
            hi = mid
        else:
            lo = mid
    t_min = hi
    top = max(t_min + 1, mpmath.log(max(log_x, mpf(1))) + 2)
    while G(top) <= log_x:
        top *= 2
        if top > LOG_R_CEILING:
            raise MahlerSearchExhausted("no r below the configured ceiling")
    lo, hi = t_min, top
    for _ in range(400):
        mid = (lo + hi) / 2
        if G(mid) > log_x:
            hi = mid
        else:
            lo = mid
        if hi - lo < mpmath.eps * hi:
            break
    return hi


def _fallback_log_r(log_x):
    # r = floor(y) + 1 with y = log x / log log x, clamped at its minimum y = e
    y = log_x / mpmath.log(log_x) if log_x > mpmath.e else mpmath.e
    if y < mpf(10) ** 30:
        return mpmath.log(mpmath.floor(y) + 1), int(mpmath.floor(y)) + 1
    return mpmath.log(y), None


def mahler_r_detail(log_x, n: int, k: int) -> MahlerR:
    """Mahler's ``r`` for ``max_coeff = e^{log_x}``.

    The factorial sandwich is solved exactly; when its solution falls outside
    Mahler's own bracket ``(log x/log log x, 6 log x/log log x)`` (the sandwich
    is degenerate unless ``x`` is astronomically large) the bracket's lower
    end is used instead.
    """
    _check_nk(n, k)
    with mpmath.workdps(DPS):
        log_x = mpf(log_x)
        if log_x < 0:
            raise ValueError("max_coeff must be at least 1")
        t = _sandwich_log_r(log_x, n, k)
        in_bracket = None
        if log_x >= mpmath.e:
            base = mpmath.log(log_x) - mpmath.log(mpmath.log(log_x))
            in_bracket = bool(base < t < base + mpmath.log(6))
        if in_bracket:
            r_int = None
            if t < 40:
                r_int = int(mpmath.floor(mpmath.exp(t)))
                while _g_int(r_int, n, k) <= log_x:
                    r_int += 1
                while r_int > 2 and _g_int(r_int - 1, n, k) > log_x:
                    r_int -= 1
                return MahlerR(mpmath.log(r_int), r_int, "sandwich", t, True)
            return MahlerR(t, None, "sandwich", t, True)
        log_r, r_int = _fallback_log_r(log_x)
        return MahlerR(log_r, r_int, "bracket_fallback", t, in_bracket)


def mahler_r(max_coeff: int, n: int, k: int) -> int:
    """Integer ``r`` for an explicit ``max_coeff >= 1``."""
    if max_coeff < 1:
        raise ValueError("max_coeff must be at least 1")
    with mpmath.workdps(DPS):
        res = mahler_r_detail(mpmath.log(max_coeff), n, k)
        if res.r is not None:
            return res.r
        return int(mpmath.ceil(mpmath.exp(res.log_r)))


def _log_h(logH, loglogH):
    if loglogH is not None:
        return mpmath.exp(mpf(loglogH)), mpf(loglogH)
    logH = mpf(logH)
    return logH, mpmath.log(logH)


def mahler_exponent(logH=None, n: int = 2, k: int = 2, *, loglogH=None, detail: bool = False):
    """``k - k log 2/log H + (2(k+1) - 1/4) C(r)/log H`` with ``r`` from max_coeff = H."""
    _check_nk(n, k)
    with mpmath.workdps(DPS):
        lh, llh = _log_h(logH, loglogH)
        if llh <= 1:
            raise ValueError("need log log H > 1")
        res = mahler_r_detail(lh, n, k)
        C = _mahler_C_log_r(res.log_r, n, k)
        val = k - k * mpmath.log(2) / lh + (2 * (k + 1) - mpf(1) / 4) * C / lh
        return (float(val), res) if detail else float(val)


def mahler_exponent_heuristic(k: int, loglogH) -> float:
    """The asymptotic form ``k + 2(k+1)^2 sqrt(log k)/sqrt(log log H)``."""
    return k + 2 * (k + 1) ** 2 * math.sqrt(math.log(k)) / math.sqrt(float(loglogH))


def ehlm_c(k: int) -> int:
    return 13 if k < 3 else 12


def ehlm_exponent(logM=None, n: int = 2, k: int = 2, *, loglogM=None) -> float:
    """``k + c_k k^2 sqrt(log(n+k))/sqrt(log log M) - k log 2/log M``."""
    _check_nk(n, k)
    with mpmath.workdps(DPS):
        lm, llm = _log_h(logM, loglogM)
        if llm <= 0:
            raise ValueError("need log log M > 0")
        val = k + ehlm_c(k) * k * k * mpmath.sqrt(mpmath.log(n + k)) / mpmath.sqrt(llm) - k * mpmath.log(2) / lm
        return float(val)


def ehlm_lower_bound_log(lambdas, n: int) -> float:
    """Log of ``M^{1-delta(M)} / (h_0 ... h_k)`` for an explicit coefficient vector."""
    k = len(lambdas) - 1
    _check_nk(n, k)
    M = max(abs(x) for x in lambdas)
    if M < 3:
        raise ValueError("need max |lambda_i| >= 3 so that log log M > 0")
    with mpmath.workdps(DPS):
        logM = mpmath.log(M)
        delta = ehlm_c(k) * k * k * mpmath.sqrt(mpmath.log(n + k)) / mpmath.sqrt(mpmath.log(logM))
        hs = sum(mpmath.log(max(1, abs(x))) for x in lambdas)
        return float((1 - delta) * logM - hs)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    k: int
    log_logH: float
    exp_paper: float
    exp_mahler: float
    exp_mahler_heuristic: float
    exp_ehlm: float
    mahler_method: str
    paper_hypothesis_satisfied: bool
    winner: str

    def corrections(self) -> dict:
        return {
            "paper": self.exp_paper - self.k,
            "mahler": self.exp_mahler - self.k,
            "ehlm": self.exp_ehlm - self.k,
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["notes"] = NOTES
        return d


def compare_row(n: int, k: int, *, logH=None, loglogH=None) -> ComparisonRow:
    with mpmath.workdps(DPS):
        lh, llh = _log_h(logH, loglogH)
        if llh <= 1:
            raise ValueError("need log log H > 1")
        paper = omega_theorem(k, loglogH=float(llh), n=n)
        mahler, res = mahler_exponent(lh, n, k, detail=True)
        ehlm = ehlm_exponent(lh, n, k)
        vals = {"this-paper": paper.value, "mahler": mahler, "ehlm": ehlm}
        winner = min(vals, key=vals.get)
        return ComparisonRow(
            n, k, float(llh), paper.value, mahler, mahler_exponent_heuristic(k, llh), ehlm,
            res.method, paper.hypothesis_satisfied, winner,
        )


def compare_report(n: int, k: int, logH_list=None, *, loglogH_list=None) -> list[ComparisonRow]:
    if loglogH_list is not None:
        return [compare_row(n, k, loglogH=x) for x in loglogH_list]
    return [compare_row(n, k, logH=x) for x in logH_list]


def correction_ratio(row: ComparisonRow, competitor: str) -> float:
    c = row.corrections()
    return c["paper"] / c[competitor]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([r.n, r.k, repr(r.log_logH), repr(r.exp_paper), repr(r.exp_mahler), repr(r.exp_ehlm), r.winner])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2, sort_keys=True)
