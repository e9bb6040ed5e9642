"""Adaptive quadrature over finite and infinite intervals."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import integrate as scipy_integrate

from ..errors import DivergenceError, EvaluationError
from ..utils import assert_positive
from .models import Interval, NumericReport
from .settings import DEFAULT_QUAD_LIMIT, default_tolerance

logger = logging.getLogger(__name__)

# quad estimates are pessimistic near the tolerance floor; flagged results within this factor of
# the requested accuracy are accepted
ACCEPTANCE_SLACK = 100.0


@dataclass(frozen=True)
class _Mapping:
    """A change of variables x = forward(t) from a finite t-interval onto the domain."""

    t_lo: float
    t_hi: float
    forward: Callable[[float], float]
    jacobian: Callable[[float], float]
    inverse: Callable[[float], float]


def _mapping(domain: Interval) -> _Mapping:
    lo, hi = domain.lo, domain.hi

    if math.isinf(lo) and math.isinf(hi):

        def inverse(x: float) -> float:
            if x == 0:
                return 0.0
            return (-1.0 + math.sqrt(1.0 + 4.0 * x * x)) / (2.0 * x)

        return _Mapping(
            -1.0,
            1.0,
            lambda t: t / (1.0 - t * t),
            lambda t: (1.0 + t * t) / (1.0 - t * t) ** 2,
            inverse,
        )

    if math.isinf(hi):
        return _Mapping(
            -1.0,
            1.0,
            lambda t: lo + (1.0 + t) / (1.0 - t),
            lambda t: 2.0 / (1.0 - t) ** 2,
            lambda x: (x - lo - 1.0) / (x - lo + 1.0),
        )

    if math.isinf(lo):
        return _Mapping(
            -1.0,
            1.0,
            lambda t: hi - (1.0 - t) / (1.0 + t),
            lambda t: 2.0 / (1.0 + t) ** 2,
            lambda x: (1.0 - (hi - x)) / (1.0 + (hi - x)),
        )

    return _Mapping(lo, hi, lambda t: t, lambda t: 1.0, lambda x: x)


def evaluate_real(f: Callable, x: float) -> float:
    """Evaluate f at x as a Python float, translating numeric failures.

    Args:
        f (Callable): The function to evaluate.
        x (float): The point.

    Returns:
        float: The value f(x).

    Raises:
        EvaluationError: If f returns NaN or fails with a math domain error.
        DivergenceError: If f overflows.

    Examples:
        >>> evaluate_real(math.exp, 0.0)
        1.0
    """
    try:
        value = float(f(x))
    except OverflowError as e:
        raise DivergenceError(f"Overflow while evaluating at x={x}") from e
    except (ValueError, ZeroDivisionError) as e:
        raise EvaluationError(f"Evaluation failed at x={x}: {e}", point=x) from e

    if math.isnan(value):
        raise EvaluationError(f"NaN returned at x={x}", point=x)
    if math.isinf(value):
        raise DivergenceError(f"Infinite value returned at x={x}")
    return value


def integrate(
    f: Callable[[float], float],
    domain: Interval,
    abs_tol: float | None = None,
    rel_tol: float | None = None,
    breakpoints: Iterable[float] = (),
    limit: int = DEFAULT_QUAD_LIMIT,
) -> NumericReport:
    """Integrate a real function over an interval.

    Unbounded domains are mapped onto (-1, 1) by a rational change of variables, then integrated
    with the adaptive Gauss-Kronrod rule of QUADPACK. Breakpoints (discontinuities of the
    integrand, such as event boundaries) are mapped along and passed to the subdivision.

    Args:
        f (Callable[[float], float]): The integrand, evaluated at interior points only.
        domain (Interval): The integration domain.
        abs_tol (float | None, optional): The absolute tolerance. Defaults to the value of
            default_tolerance().
        rel_tol (float | None, optional): The relative tolerance. Defaults to the value of
            default_tolerance().
        breakpoints (Iterable[float], optional): Points where f is not smooth. Defaults to ().
        limit (int, optional): The maximum number of subintervals. Defaults to
            DEFAULT_QUAD_LIMIT.

    Returns:
        NumericReport: The estimate, its error estimate and the number of evaluations.

    Raises:
        DivergenceError: If the quadrature does not converge, carrying the partial estimate.
        EvaluationError: If f returns NaN.
        ValueError: If a tolerance is not positive.

    Examples:
        >>> from scipy.stats import norm
        >>> integrate(norm.pdf, Interval(-math.inf, math.inf)).value
        1.0
        >>> integrate(lambda x: 0.0, Interval(0, 1)).value
        0.0
    """
    abs_tol = default_tolerance() if abs_tol is None else abs_tol
    rel_tol = default_tolerance() if rel_tol is None else rel_tol
    assert_positive(abs_tol, "abs_tol")
    assert_positive(rel_tol, "rel_tol")

    if not domain.has_interior:
        return NumericReport(0.0, 0.0, 1)

    mapping = _mapping(domain)

    def integrand(t: float) -> float:
        x = mapping.forward(t)
        if math.isinf(x):
            return 0.0
        return evaluate_real(f, x) * mapping.jacobian(t)

    points = sorted(
        {
            mapping.inverse(float(x))
            for x in breakpoints
            if math.isfinite(x) and domain.lo < x < domain.hi
        }
    )
    points = [t for t in points if mapping.t_lo < t < mapping.t_hi]

    with np.errstate(all="ignore"):
        result = scipy_integrate.quad(
            integrand,
            mapping.t_lo,
            mapping.t_hi,
            epsabs=abs_tol,
            epsrel=max(rel_tol, 1e-14),
            limit=limit,
            points=points or None,
            full_output=1,
        )

    value, abs_error = float(result[0]), float(result[1])
    evaluations = max(1, int(result[2].get("neval", 1)))
    report = NumericReport(value, abs_error if math.isfinite(abs_error) else math.inf, evaluations)

    if not math.isfinite(value):
        raise DivergenceError(f"Quadrature over {domain} produced {value}", partial=report)

    if len(result) > 3:
        target = max(abs_tol, rel_tol * abs(value))
        if abs_error <= ACCEPTANCE_SLACK * target:
            logger.debug("Accepting flagged quadrature over %s: %s", domain, result[3])
            return report
        logger.debug("Quadrature over %s did not converge: %s", domain, result[3])
        raise DivergenceError(
            f"Quadrature over {domain} did not converge (estimate {value:.6g}, "
            f"error {abs_error:.3g})",
            partial=report,
        )

    return report


def legendre_rule(lo: float, hi: float, order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Return the nodes and weights of the Gauss-Legendre rule on [lo, hi].

    The weights carry the sign of hi - lo, so that reversed bounds flip the integral.

    Args:
        lo (float): The lower bound.
        hi (float): The upper bound.
        order (int, optional): The number of nodes. Defaults to 32.

    Returns:
        tuple[np.ndarray, np.ndarray]: The nodes and the weights.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    return mid + half * nodes, half * weights


def gauss_legendre(f: Callable[[float], float], lo: float, hi: float, order: int = 32) -> float:
    """Integrate a smooth function over a short finite interval with a fixed rule.

    The nodes do not depend on f, see legendre_rule() for callers that cache quantities
    attached to them.

    Args:
        f (Callable[[float], float]): The integrand.
        lo (float): The lower bound, may exceed hi (the sign flips).
        hi (float): The upper bound.
        order (int, optional): The number of nodes. Defaults to 32.

    Returns:
        float: The estimate.

    Examples:
        >>> gauss_legendre(lambda u: u * u, 0.0, 1.0)
        0.33333333333333337
    """
    if lo == hi:
        return 0.0
    nodes, weights = legendre_rule(lo, hi, order)
    return math.fsum(float(w) * evaluate_real(f, float(t)) for t, w in zip(nodes, weights))
