"""Series summation over integer ranges."""

from __future__ import annotations

import logging
import math
from typing import Callable

from ..errors import DivergenceError
from ..utils import assert_positive
from .models import IntRange, NumericReport
from .quadrature import evaluate_real
from .settings import default_max_terms, default_tolerance

logger = logging.getLogger(__name__)

# Minimum number of terms before the tail heuristic may stop the summation
MIN_TERMS = 8

# Number of trailing terms used by the geometric-ratio heuristic
RATIO_WINDOW = 4


def _geometric_tail(window: list[float]) -> float:
    """Bound the tail after the last term of a window by a geometric series.

    Returns inf when the window does not decrease.
    """
    magnitudes = [abs(term) for term in window]
    if all(term == 0 for term in magnitudes):
        return 0.0
    ratios = []
    for previous, current in zip(magnitudes, magnitudes[1:]):
        if previous == 0:
            if current != 0:
                return math.inf
            continue
        ratios.append(current / previous)
    if not ratios:
        return 0.0
    ratio = max(ratios)
    if ratio >= 1:
        return math.inf
    return magnitudes[-1] * ratio / (1 - ratio)


def sum_series(
    f: Callable[[int], float],
    domain: IntRange,
    abs_tol: float | None = None,
    rel_tol: float = 0.0,
    majorant: Callable[[int], float] | None = None,
    max_terms: int | None = None,
) -> NumericReport:
    """Sum f over an integer range.

    Finite ranges are summed exactly with compensated summation. Infinite ranges are truncated
    once a tail bound drops below a tenth of the target accuracy. The tail bound is the caller's
    majorant when given (majorant(k) bounds the sum of |f(j)| for j > k), otherwise a geometric
    bound from the ratios of the last terms.

    Args:
        f (Callable[[int], float]): The summand.
        domain (IntRange): The range of summation.
        abs_tol (float | None, optional): The absolute tolerance. Defaults to the value of
            default_tolerance().
        rel_tol (float, optional): A relative tolerance, useful for sums of tiny terms.
            Defaults to 0.0.
        majorant (Callable[[int], float] | None, optional): The tail majorant. Defaults to None.
        max_terms (int | None, optional): The term budget for infinite ranges. Defaults to the
            value of default_max_terms().

    Returns:
        NumericReport: The sum, with the tail bound as error estimate.

    Raises:
        DivergenceError: If the tail bound is not reached within the term budget.
        EvaluationError: If f returns NaN.

    Examples:
        >>> sum_series(lambda j: j, IntRange(0, 3)).value
        6.0
        >>> from scipy.stats import poisson
        >>> round(sum_series(lambda j: poisson.pmf(j, 1.0), IntRange(0, math.inf)).value, 12)
        1.0
    """
    abs_tol = default_tolerance() if abs_tol is None else abs_tol
    assert_positive(abs_tol, "abs_tol")
    max_terms = default_max_terms() if max_terms is None else max_terms

    if domain.is_finite:
        values = [evaluate_real(f, j) for j in domain.points()]
        return NumericReport(math.fsum(values), 0.0, max(1, len(values)))

    terms: list[float] = []
    running = 0.0
    tail = math.inf
    for j in domain.points(limit=max_terms):
        terms.append(evaluate_real(f, j))
        running += terms[-1]
        if len(terms) < MIN_TERMS:
            continue

        tail = majorant(j) if majorant is not None else _geometric_tail(terms[-RATIO_WINDOW:])
        target = max(abs_tol, rel_tol * abs(running))
        if tail < target / 10:
            return NumericReport(math.fsum(terms), tail, len(terms))

    partial = NumericReport(math.fsum(terms), tail, max(1, len(terms)))
    logger.debug("Series over %s not converged after %d terms", domain, len(terms))
    raise DivergenceError(
        f"Series over {domain} did not reach its tail bound within {max_terms} terms",
        partial=partial,
    )
