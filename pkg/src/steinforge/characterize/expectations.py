"""Expectations of Stein operators under a law of the data."""

from __future__ import annotations

import logging
import math
from typing import Any, Iterable, Sequence

import numpy as np

from ..errors import ConditioningError, DivergenceError, NumericError, ParameterError
from ..families import OperatorFlavor, ParametricFamily, ParametrizedLaw, Theta, probability
from ..numerics import Domain, NumericReport, integrate, sum_series
from ..operators import SteinOperator
from ..test_functions import TestFunction
from .reports import CurvePoint

logger = logging.getLogger(__name__)


def _within(inner: Domain, outer: Domain) -> bool:
    return inner.lo >= outer.lo and inner.hi <= outer.hi


def is_conditional(law: ParametrizedLaw, op: SteinOperator) -> bool:
    """Tell whether the law puts mass outside the support of the operator's target.

    Args:
        law (ParametrizedLaw): The law of the data.
        op (SteinOperator): The operator.

    Returns:
        bool: True when S_theta is not contained in S_theta0.

    Examples:
        >>> family = builtin("exponential_loc")
        >>> op = SteinOperator.create(family, 0.0, "location")
        >>> is_conditional(family.at(0.5), op), is_conditional(family.at(-0.5), op)
        (False, True)
    """
    return not _within(law.support, op.law.support)


def expectation_of_operator(
    law: ParametrizedLaw,
    op: SteinOperator,
    f: TestFunction,
    breakpoints: Iterable[float] = (),
    abs_tol: float | None = None,
) -> NumericReport:
    """Compute E[T f(X)] for X drawn from a law, boundary functional included.

    The operator values are integrated (or summed) against the density of the law over
    S_theta intersected with S_theta0, and the boundary functional of the operator, weighted by
    the law's one-sided density at the endpoints of S_theta0, is added. When the law puts mass
    outside S_theta0 the expectation is taken conditionally on S_theta0.

    Args:
        law (ParametrizedLaw): The law of the data, a family at theta.
        op (SteinOperator): The operator T_theta0.
        f (TestFunction): The test function f0 the operator is applied to.
        breakpoints (Iterable[float], optional): Points where the integrand is not smooth.
            Defaults to ().
        abs_tol (float | None, optional): The absolute tolerance. Defaults to the value of
            default_tolerance().

    Returns:
        NumericReport: The expectation and its error estimate.

    Raises:
        ParameterError: If the law and the operator do not share their reference measure.
        ConditioningError: If the law gives no mass to S_theta0.
        DivergenceError: If the integral or the series does not converge, carrying the
            partial value.

    Examples:
        >>> family = builtin("gaussian_loc")
        >>> op = SteinOperator.create(family, 0.0, "location")
        >>> round(expectation_of_operator(family.at(0.0), op, identity()).value, 10)
        0.0
    """
    if law.discrete != op.family.discrete:
        raise ParameterError(
            f"The law {law.label} and the operator {op} do not share their reference measure"
        )
    target = op.law.support
    domain = law.support.intersect(target)
    if domain is None:
        raise ConditioningError(f"The law {law.label} gives no mass to the support {target}")

    conditional = is_conditional(law, op)
    mass = probability(law.family, law.theta, target) if conditional else 1.0
    if conditional:
        if mass <= 0:
            raise ConditioningError(f"The law {law.label} gives no mass to the support {target}")
        logger.info("Conditioning %s on %s, mass %.6g", law.label, target, mass)

    def term(x: float) -> float:
        density = float(law.density(x))
        if density == 0:
            return 0.0
        return float(op.values(f, x)) * density

    try:
        if law.discrete:
            report = sum_series(lambda j: term(float(j)), domain, abs_tol)
        else:
            points = [x for x in breakpoints if domain.lo < x < domain.hi]
            report = integrate(term, domain, abs_tol, breakpoints=points)
    except DivergenceError as e:
        raise DivergenceError(
            f"E[T f] of {f} under {law.label} did not converge: {e}", partial=e.partial
        ) from e

    boundary = op.boundary(f, law)
    report = NumericReport(report.value + boundary, report.abs_error_estimate, report.evaluations)
    logger.debug("E[T %s] under %s = %.6g + %.6g", f, law.label, report.value, boundary)
    return report.scaled(1.0 / mass) if conditional else report


def shifted_theta(
    family: ParametricFamily, theta0: Any, delta: float, coordinate: int = 0
) -> Theta:
    """Return theta0 + delta on one coordinate, checked against the parameter space.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter.
        delta (float): The shift.
        coordinate (int, optional): The shifted coordinate. Defaults to 0.

    Returns:
        Theta: The shifted parameter.

    Raises:
        ParameterError: If the shifted parameter is outside the parameter space.
    """
    theta = list(family.check_theta(theta0))
    if not 0 <= coordinate < len(theta):
        raise ParameterError(f"coordinate must lie in [0, {len(theta)}), got {coordinate}")
    theta[coordinate] += float(delta)
    return family.check_theta(theta)


def discrimination_curve(
    family: ParametricFamily,
    theta0: Any,
    flavor: OperatorFlavor | str | None,
    f: TestFunction,
    deltas: Sequence[float],
    coordinate: int = 0,
) -> list[CurvePoint]:
    """Trace delta -> E[T_theta0 f(X)] for X drawn from g(.;theta0 + delta).

    Points where the shifted parameter is invalid, or the expectation fails, are recorded with
    a NaN expectation and a message.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter of the operator.
        flavor (OperatorFlavor | str | None): The flavor. Defaults to the family's default
            flavor.
        f (TestFunction): The test function.
        deltas (Sequence[float]): The shifts.
        coordinate (int, optional): The shifted coordinate. Defaults to 0.

    Returns:
        list[CurvePoint]: One point per shift, in order.

    Examples:
        >>> curve = discrimination_curve(builtin("gaussian_loc"), 0.0, None, constant(), [0.1])
        >>> round(curve[0].expectation, 8)
        0.1
    """
    op = SteinOperator.create(family, theta0, flavor, coordinate)
    curve = []
    for delta in deltas:
        try:
            theta = shifted_theta(family, op.theta0, delta, coordinate)
            report = expectation_of_operator(family.at(theta), op, f)
            curve.append(CurvePoint(float(delta), report.value, report.abs_error_estimate))
        except (NumericError, ParameterError, ConditioningError) as e:
            logger.warning("No expectation at delta=%g for %s: %s", delta, family.name, e)
            curve.append(CurvePoint(float(delta), math.nan, math.nan, str(e)))
    return curve


def coordinate_expectations(law: ParametrizedLaw, op: SteinOperator, f: TestFunction) -> np.ndarray:
    """Return the coordinates of E[T f(X)] for the vector operator, one per kept coordinate.

    Args:
        law (ParametrizedLaw): The law of the data.
        op (SteinOperator): A generic operator.
        f (TestFunction): The test function.

    Returns:
        np.ndarray: The expectations of the kept coordinates.

    Raises:
        ParameterError: If the operator is not generic.
    """
    if op.flavor != OperatorFlavor.GENERIC:
        raise ParameterError(f"Coordinatewise expectations need a generic operator, got {op}")
    kept = op.coordinates or tuple(range(len(op.theta0)))
    values = []
    for j in kept:
        column = SteinOperator.create(op.family, op.theta0, op.flavor, j)
        values.append(expectation_of_operator(law, column, f).value)
    return np.asarray(values)
