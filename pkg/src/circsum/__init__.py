"""Verification engine for circular-summation identities of Jacobi theta
functions: numeric theta/lattice-sum evaluators, an exact formal q-series
engine over cyclotomic integers, an identity catalog, and a seeded
randomized verification harness."""

from .theta import (DomainError, EvalConfig, TauPoint, ThetaKind,
                    TruncationError, ramanujan_f, ramanujan_lhs, theta,
                    quasi_shift_reference, truncation_order)
from .lattice import (ConstrainedSumSpec, RFamily, eval_G, eval_R, eval_R33,
                      eval_R_single, eval_constrained_sum, eval_cubic)
from .qseries import CycRing, QSeries, cyclotomic_poly, fn_series, theta_qseries
from .catalog import (CATALOG, HypothesisError, IdentityInstance,
                      identity_series_check, lhs_value, list_catalog,
                      rhs_kind, rhs_value, validate)
from .harness import (SampleDomain, SplitMix64, VerificationReport,
                     default_suite, fn_leading_check, gn_fn_modular_check,
                     oracle_sum, oracle_theta, run_suite, verify)

__version__ = "0.1.0"

__all__ = [
    "CATALOG", "ConstrainedSumSpec", "CycRing", "DomainError", "EvalConfig",
    "HypothesisError", "IdentityInstance", "QSeries", "RFamily",
    "SampleDomain", "SplitMix64", "TauPoint", "ThetaKind", "TruncationError",
    "VerificationReport", "cyclotomic_poly", "default_suite",
    "eval_G", "eval_R", "eval_R33", "eval_R_single", "eval_constrained_sum",
    "eval_cubic", "fn_leading_check", "fn_series", "gn_fn_modular_check",
    "identity_series_check", "lhs_value", "list_catalog", "oracle_sum",
    "oracle_theta", "quasi_shift_reference", "ramanujan_f", "ramanujan_lhs",
    "rhs_kind", "rhs_value", "run_suite", "theta", "theta_qseries",
    "truncation_order", "validate", "verify",
]
