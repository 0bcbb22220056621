import json
import math

import mpmath
import pytest

from emeasure import certify as cert
from oracles import naive_min_form


def _close(rec, ref):
    # the oracle is good to ~40 digits, far tighter than the certified ball
    with mpmath.workdps(50):
        lo, hi = rec.min_value.lower_fraction(), rec.min_value.upper_fraction()
        tol = mpmath.mpf(10) ** -35
        return mpmath.mpf(lo.numerator) / lo.denominator - tol <= ref <= mpmath.mpf(hi.numerator) / hi.denominator + tol


@pytest.mark.parametrize("n,k,H", [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 3, 1), (2, 3, 2), (3, 3, 2)])
def test_matches_full_enumeration(n, k, H):
    rec = cert.min_linear_form(n, k, H)
    ref, arg = naive_min_form(n, k, H)
    assert _close(rec, ref)
    assert rec.argmin == arg


@pytest.mark.parametrize("n,k,H", [(2, 2, 1), (2, 2, 3), (2, 3, 2)])
def test_bounded_lambda0_matches_enumeration(n, k, H):
    rec = cert.min_linear_form(n, k, H, lambda0_bounded=True)
    ref, _ = naive_min_form(n, k, H, lambda0_bound=H)
    assert _close(rec, ref)
    assert rec.tuples_scanned == cert.tuples_scanned(k, H, True)


def test_known_value_h1():
    rec = cert.min_linear_form(2, 2, 1)
    assert float(rec.min_value) == pytest.approx(0.0695569, abs=1e-5)
    assert rec.argmin == (-1, -1, 1)


def test_determinism_and_jobs():
    a = cert.min_linear_form(2, 3, 6)
    b = cert.min_linear_form(2, 3, 6)
    c = cert.min_linear_form(2, 3, 6, jobs=2)
    assert a == b == c


def test_precision_argument_respected():
    rec = cert.min_linear_form(2, 2, 5, precision_bits=300)
    assert rec.min_value.precision >= 300


def test_monotone_in_H():
    recs = cert.empirical_omega_curve(2, 2, range(3, 31))
    for a, b in zip(recs, recs[1:]):
        # min over a larger box can only shrink; equal minima overlap as balls
        assert b.min_value.lower_fraction() <= a.min_value.upper_fraction()


def test_curve_matches_single_calls():
    recs = cert.empirical_omega_curve(2, 3, [3, 5, 8])
    for r in recs:
        single = cert.certify_against_theorem(2, 3, r.H)
        assert single.argmin == r.argmin
        assert single.verdict == r.verdict


def test_verdicts_and_json():
    rec = cert.certify_against_theorem(2, 2, 100)
    assert rec.verdict is True
    assert rec.theorem_omega > rec.empirical_omega
    assert not rec.hypothesis_satisfied
    d = json.loads(rec.to_json())
    assert set(d) >= {"n", "k", "H", "min_value", "argmin", "empirical_omega", "theorem_omega",
                      "hypothesis_satisfied", "tuples_scanned", "wall_time_ms"}
    assert set(d["min_value"]) == {"midpoint_decimal", "radius_decimal", "precision_bits"}
    assert d["empirical_omega"] == pytest.approx(-math.log(float(rec.min_value)) / math.log(100))


def test_argmin_reproduces_value():
    rec = cert.min_linear_form(2, 3, 10)
    with mpmath.workdps(50):
        v = abs(rec.argmin[0] + sum(l * mpmath.exp(mpmath.mpf(i) / 2) for i, l in enumerate(rec.argmin[1:], 1)))
    assert _close(rec, v)
    lead = next(x for x in reversed(rec.argmin) if x)
    assert lead > 0


def test_input_errors():
    with pytest.raises(ValueError):
        cert.min_linear_form(2, 1, 3)
    with pytest.raises(ValueError):
        cert.min_linear_form(2, 2, 0)
    with pytest.raises(ValueError):
        cert.certify_against_theorem(2, 2, 2)
    with pytest.raises(ValueError):
        cert.empirical_omega_curve(2, 2, [2, 5])
    assert cert.empirical_omega_curve(2, 2, []) == []


def test_precision_exhausted(monkeypatch):
    # a form ball that never excludes zero forces doubling up to the ceiling
    monkeypatch.setattr(cert, "PRECISION_CEILING", 256)
    real = cert._form_ball

    def fuzzy(inner, exps, H, bounded):
        v, lam0 = real(inner, exps, H, bounded)
        return v - v, lam0

    monkeypatch.setattr(cert, "_form_ball", fuzzy)
    with pytest.raises(cert.PrecisionExhausted):
        cert.min_linear_form(2, 2, 3, precision_bits=64)
