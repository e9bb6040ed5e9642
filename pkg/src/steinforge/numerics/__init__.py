"""Integration, summation and differencing engine."""

__all__ = [
    "central_diff",
    "DEFAULT_CHECK_SECONDS",
    "default_check_seconds",
    "DEFAULT_MAX_TERMS",
    "DEFAULT_TOL",
    "default_max_terms",
    "default_tolerance",
    "Domain",
    "evaluate_real",
    "forward_diff_int",
    "gauss_legendre",
    "integrate",
    "Interval",
    "IntRange",
    "legendre_rule",
    "NumericReport",
    "step_size",
    "sum_series",
]

from .differences import central_diff, forward_diff_int, step_size
from .models import Domain, Interval, IntRange, NumericReport
from .quadrature import evaluate_real, gauss_legendre, integrate, legendre_rule
from .series import sum_series
from .settings import (
    DEFAULT_CHECK_SECONDS,
    DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
    default_check_seconds,
    default_max_terms,
    default_tolerance,
)
