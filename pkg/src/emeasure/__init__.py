"""Effective transcendence measure of e^{1/n}: exact construction, bounds and certificates."""

from .ball import ErrorTrackedReal, InsufficientPrecision, real_exp_fraction
from .bounds import omega_theorem, q_func, r_func, z_inverse
from .certify import CertificateRecord, certify_against_theorem, empirical_omega_curve, min_linear_form
from .compare import ComparisonRow, compare_report, ehlm_exponent, mahler_exponent
from .exact import ExactPolynomial, ExactRational, TruncatedSeries
from .pade import ApproximationSystem, InputDomainError, normalize_system

__version__ = "0.1.0"
