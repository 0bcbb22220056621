"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import ast
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import mpmath
import numpy as np
import pytest

import conftest
from emeasure import bounds, certify, checks, compare
from oracles import naive_min_form, quad_upper_gamma


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_structural():
    t0 = time.perf_counter()
    grid = [(n, k, ell) for n in (2, 3) for k in range(n, 6) for ell in range(2, 9)]
    bad: dict[str, list] = {}
    for n, k, ell in grid:
        for r in checks.structural_check(n, k, ell, strict=True):
            if not r.passed:
                bad.setdefault(r.name, []).append((n, k, ell, r.detail))
    dt = time.perf_counter() - t0
    zeros = bad.get("coefficient_L_plus_1_nonzero", [])
    # every failure must be a forced zero of the symmetric exponent vector
    explained = all(
        checks.symmetric_case(k, ell, *uj)
        for n, k, ell, detail in zeros
        for uj in ast.literal_eval(detail.split("=", 1)[1].strip())
    )
    ok = not bad and dt < 60
    others = {k: len(v) for k, v in bad.items() if k != "coefficient_L_plus_1_nonzero"}
    _report(1, ok, f"{len(grid)} (n,k,ell) cases in {dt:.1f}s; "
                   f"zero order-(L+1) coefficient in {len(zeros)} cases"
                   f"{' (all symmetric u=k/2, j=k, even k and ell)' if zeros and explained else ''}; "
                   f"other failures {others or 'none'}")


def test_criterion_2_constant_table():
    t0 = time.perf_counter()
    fails = []
    for (n, k) in bounds.C_TABLE:
        r = checks.table_check(n, k)
        if not r.passed:
            fails.append(f"({n},{k}) {r.detail} vs v={float(Fraction(r.params['table'])):g}")
    v22 = float(bounds.c_small_max(2, 2).attained)
    exact22 = abs(v22 - 1 / (12 * math.sqrt(3))) <= 1e-6 and v22 <= 0.049
    dt = time.perf_counter() - t0
    _report(2, not fails and exact22 and dt < 5,
            f"(2,2) = {v22:.6f}; {len(bounds.C_TABLE) - len(fails)}/{len(bounds.C_TABLE)} table entries in [0.9v, v]"
            f"{'; out of range: ' + '; '.join(fails) if fails else ''}; {dt:.2f}s")


def test_criterion_3_max_product():
    t0 = time.perf_counter()
    fails = [(n, k) for k in range(2, 11) for n in range(2, k + 1) if not checks.max_product_check(n, k).passed]
    dt = time.perf_counter() - t0
    _report(3, not fails and dt < 5, f"k = 2..10, n = 2..k; failures {fails or 'none'}; {dt:.2f}s")


@pytest.mark.slow
def test_criterion_4_deep_and_proof_chain():
    t0 = time.perf_counter()
    hyp, rows = checks.deep_check(2, 2, 2200, 25000)
    dt = time.perf_counter() - t0
    deep_ok = hyp and all(r.passed for r in rows) and min(r.precision_bits for r in rows) >= 25000 and dt <= 300
    worst_q = max(r.log_abs_A - r.q for r in rows)
    worst_r = max(r.log_sum_L - r.minus_r for r in rows)
    chain = []
    for n, k in ((3, 3), (2, 4), (3, 4), (2, 5)):
        chain += checks.proof_chain_check(n, k)
    chain_fail = [(c.name, c.params) for c in chain if not c.passed]
    applied = sum("hypothesis not met" not in c.detail for c in chain)
    _report(4, deep_ok and not chain_fail,
            f"(2,2) ell=2200: hypothesis={hyp}, max(log|A|-q)={worst_q:.1f}, max(log sum|L|+r)={worst_r:.1f}, "
            f"{dt:.0f}s; proof steps {len(chain) - len(chain_fail)}/{len(chain)} ok "
            f"({applied} applicable at ell in 1e6/1e9/1e12)")


def test_criterion_5_identity():
    coef = 4 * math.log(2) * 3.319
    fs = {(2, 3): (bounds.f_func(2, 3), 1.145), (2, 4): (bounds.f_func(2, 4), 1.114), (3, 3): (bounds.f_func(3, 3), 1.08)}
    small_ok = all(v < cap for v, cap in fs.values())
    worst = max(bounds.f_func(n, k) - (1 + 0.69 / (math.log(k) - 1)) for k in range(5, 201) for n in range(2, k + 1))
    ok = abs(coef - 9.2023) <= 0.001 and abs(coef - 9.202255) <= 0.001 and small_ok and worst < 0
    _report(5, ok, f"4 log2 * 3.319 = {coef:.6f}; "
                   + ", ".join(f"f{nk} = {v:.5f} < {cap}" for nk, (v, cap) in fs.items())
                   + f"; max f - (1 + 0.69/(log k - 1)) over 5<=k<=200 = {worst:.4f}")


def test_criterion_6_comparison():
    parts, ok = [], True
    for n, k in ((2, 2), (2, 5)):
        lo, hi = compare.compare_report(n, k, loglogH_list=[1e3, 1e6])
        for row in (lo, hi):
            ok &= row.exp_paper < row.exp_ehlm and row.exp_paper < row.exp_mahler
        for comp in ("mahler", "ehlm"):
            fac = compare.correction_ratio(lo, comp) / compare.correction_ratio(hi, comp)
            ok &= fac >= 10
            parts.append(f"({n},{k}) vs {comp} x{fac:.2f}")
    _report(6, ok, "ordering this < EHLM, Mahler at loglogH 1e3/1e6; ratio decrease " + ", ".join(parts))


def test_criterion_7_certifier():
    rec = certify.min_linear_form(2, 2, 1)
    sign = 1 if rec.argmin == (-1, -1, 1) else -1 if rec.argmin == (1, 1, -1) else 0
    a = abs(float(rec.min_value) - 0.069557) <= 1e-5 and sign != 0

    b = True
    for k in (2, 3):
        for H in (1, 2, 3):
            for bounded in (False, True):
                got = certify.min_linear_form(2, k, H, lambda0_bounded=bounded)
                ref, arg = naive_min_form(2, k, H, lambda0_bound=H if bounded else None)
                lo, hi = got.min_value.lower_fraction(), got.min_value.upper_fraction()
                with mpmath.workdps(50):
                    inside = mpmath.mpf(lo.numerator) / lo.denominator <= ref <= mpmath.mpf(hi.numerator) / hi.denominator
                b &= bool(inside) and (bounded or got.argmin == arg)

    c, count = True, 0
    for k in (2, 3):
        for r in certify.empirical_omega_curve(2, k, range(3, 101)):
            c &= r.verdict is True and r.hypothesis_satisfied is False
            count += 1

    t0 = time.perf_counter()
    certify.certify_against_theorem(2, 2, 100)
    dt = time.perf_counter() - t0
    d = dt < 10
    _report(7, a and b and c and d,
            f"(a) min {float(rec.min_value):.7f} at {rec.argmin}: {a}; (b) reduced = naive for H<=3, k<=3: {b}; "
            f"(c) min > H^-omega on {count} (k,H) points, hypothesis false throughout: {c}; "
            f"(d) H=100 in {dt:.2f}s: {d}. Property-based: the theorem's hypothesis is out of desk range")


def test_criterion_8_z_inverse_and_gamma_tail():
    ys = np.concatenate(([0.0], np.logspace(-12, 12, 9999)))
    worst = max(abs(z * math.log(z) - y) / max(1.0, y) for y in ys for z in [bounds.z_inverse(float(y))])
    z_ok = worst <= 1e-12
    g_ok, samples = True, 0
    for c in (Fraction(3, 2), Fraction(2), Fraction(3)):
        for k, ell in ((2, 2), (2, 5), (3, 4)):
            val = bounds.gamma_tail_series(c, k, ell)
            ref = quad_upper_gamma((k + 1) * ell - 1, c * (k + 1) * ell)
            with mpmath.workdps(50):
                g_ok &= bool(abs(ref - mpmath.mpf(val.mid)) <= mpmath.mpf(val.rad) + mpmath.mpf(10) ** -40 * ref)
            samples += 1
    _report(8, z_ok and g_ok, f"z_inverse max scaled residual {worst:.2e} on {len(ys)} points; "
                              f"gamma tail within tracked error on {samples} samples: {g_ok}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
