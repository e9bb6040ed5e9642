"""Vectorized evaluation of the operator flavors and of their boundary functionals.

Every function takes the family and theta0 explicitly, returns exactly 0 outside S_theta0 and
keeps the shape of x.
"""

from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from ..errors import BoundaryError, DegenerateDensityError
from ..families import ParametricFamily, ParametrizedLaw, Theta, score_values, spatial_values
from ..numerics import step_size
from ..test_functions import TestFunction, TwoArgument

logger = logging.getLogger(__name__)


def _inside(family: ParametricFamily, theta0: Theta, x: np.ndarray) -> np.ndarray:
    return np.asarray(family.support_fn(theta0).contains(x), dtype=bool)


def _log_density(family: ParametricFamily, theta0: Theta, x: np.ndarray) -> np.ndarray:
    """Return log g(x;theta0), raising where it is -inf inside the support."""
    inside = _inside(family, theta0, x)
    log_density = np.asarray(family.log_density(x, theta0), dtype=float)
    degenerate = inside & ~(log_density > -np.inf)
    if np.any(degenerate):
        point = float(np.asarray(x)[degenerate].flat[0])
        raise DegenerateDensityError(
            f"g(x;{theta0}) of {family.name} vanishes at x={point:g} inside the support"
        )
    return log_density


def _moved(theta: Theta, coordinate: int, value: float) -> Theta:
    moved = list(theta)
    moved[coordinate] = value
    return tuple(moved)


def generic_values(
    family: ParametricFamily,
    theta0: Theta,
    form: TwoArgument,
    x: Any,
    coordinates: tuple[int, ...] | None = None,
) -> np.ndarray:
    """Evaluate the parameter-derivative operator grad_theta (f g) / g at theta0.

    The derivative is a central difference of theta -> f(x;theta) g(x;theta) / g(x;theta0),
    with the density ratio taken in log space.

    Args:
        family (ParametricFamily): The family.
        theta0 (Theta): The parameter.
        form (TwoArgument): The two-argument form f(x;theta).
        x (Any): A point or an array of points.
        coordinates (tuple[int, ...] | None, optional): The parameter coordinates to keep.
            Defaults to all of them.

    Returns:
        np.ndarray: The values, with a trailing axis of one entry per kept coordinate.

    Raises:
        DegenerateDensityError: If g(x;theta0) = 0 inside the support.
    """
    values = np.asarray(x, dtype=float)
    inside = _inside(family, theta0, values)
    base = _log_density(family, theta0, values)
    safe = np.where(inside, values, np.nan)
    coordinates = tuple(range(len(theta0))) if coordinates is None else coordinates

    columns = []
    for coordinate in coordinates:
        h = step_size(theta0[coordinate])
        upper = _moved(theta0, coordinate, theta0[coordinate] + h)
        lower = _moved(theta0, coordinate, theta0[coordinate] - h)
        h = 0.5 * (upper[coordinate] - lower[coordinate])
        with np.errstate(all="ignore"):
            forward = np.asarray(form(safe, upper), dtype=float) * np.exp(
                np.asarray(family.log_density(safe, upper), dtype=float) - base
            )
            backward = np.asarray(form(safe, lower), dtype=float) * np.exp(
                np.asarray(family.log_density(safe, lower), dtype=float) - base
            )
            derivative = (forward - backward) / (2.0 * h)
        columns.append(np.where(inside, derivative, 0.0))
    return np.stack(columns, axis=-1)


def _finite_score(
    family: ParametricFamily, theta0: Theta, x: np.ndarray, inside: np.ndarray
) -> np.ndarray:
    score = spatial_values(family, np.where(inside, x, 0.0), theta0)
    singular = inside & ~np.isfinite(score)
    if np.any(singular):
        point = float(x[singular].flat[0])
        raise BoundaryError(
            f"The spatial score of {family.name} is singular at x={point:g}, "
            "use a test function premultiplied by a vanishing weight"
        )
    return np.where(inside, score, 0.0)


def location_values(family: ParametricFamily, theta0: Theta, f0: TestFunction, x: Any) -> Any:
    """Evaluate -(f0'(t) + f0(t) g'/g(x)) with t = x - mu0.

    Args:
        family (ParametricFamily): A continuous location family.
        theta0 (Theta): The parameter (mu0,).
        f0 (TestFunction): The test function.
        x (Any): A point or an array of points.

    Returns:
        Any: The values.

    Raises:
        BoundaryError: If the spatial score is singular at a support point.
    """
    values = np.asarray(x, dtype=float)
    inside = _inside(family, theta0, values)
    score = _finite_score(family, theta0, values, inside)
    t = np.where(inside, values - theta0[0], 0.0)
    result = -(np.asarray(f0.derivative(t)) + np.asarray(f0.eval(t)) * score)
    return np.where(inside, result, 0.0)


def scale_values(family: ParametricFamily, theta0: Theta, f0: TestFunction, x: Any) -> Any:
    """Evaluate x f0'(sigma0 x) + f0(sigma0 x) (1/sigma0 + x g'/g(x) / sigma0).

    Args:
        family (ParametricFamily): A continuous scale family.
        theta0 (Theta): The parameter (sigma0,).
        f0 (TestFunction): The test function.
        x (Any): A point or an array of points.

    Returns:
        Any: The values.

    Raises:
        BoundaryError: If the spatial score is singular at a support point.
    """
    values = np.asarray(x, dtype=float)
    sigma = theta0[0]
    inside = _inside(family, theta0, values)
    score = _finite_score(family, theta0, values, inside)
    safe = np.where(inside, values, 0.0)
    u = sigma * safe
    result = safe * np.asarray(f0.derivative(u)) + np.asarray(f0.eval(u)) * (
        1.0 / sigma + safe * score / sigma
    )
    return np.where(inside, result, 0.0)


def discrete_values(
    family: ParametricFamily, theta0: Theta, f0: TestFunction, x: Any, coordinate: int = 0
) -> Any:
    """Evaluate the forward difference of f0 psi divided by g(x;theta0).

    It is computed as (f0(x+1) r(x) (s(x+1) - s(0)) - f0(x) (s(x) - s(0))) / g(0) where
    r(x) = g(x+1) / g(x) and s is the parameter score.

    Args:
        family (ParametricFamily): A discrete family.
        theta0 (Theta): The parameter.
        f0 (TestFunction): The test function.
        x (Any): A point or an array of points.
        coordinate (int, optional): The parameter coordinate. Defaults to 0.

    Returns:
        Any: The values.

    Raises:
        DegenerateDensityError: If g vanishes at 0 or at a support point.
    """
    values = np.asarray(x, dtype=float)
    inside = _inside(family, theta0, values)
    _log_density(family, theta0, values)
    origin = float(family.log_density(0.0, theta0))
    if math.isinf(origin):
        raise DegenerateDensityError(f"{family.name} vanishes at 0, psi is undefined")

    safe = np.where(inside, values, 0.0)
    base = np.asarray(family.log_density(safe, theta0), dtype=float)
    with np.errstate(all="ignore"):
        ratio = np.exp(np.asarray(family.log_density(safe + 1, theta0), dtype=float) - base)
        ratio = np.where(_inside(family, theta0, safe + 1), ratio, 0.0)
        following = np.where(ratio > 0, safe + 1, 0.0)
        reference = float(score_values(family, 0.0, theta0, coordinate))
        upper = score_values(family, following, theta0, coordinate) - reference
        upper = np.where(ratio > 0, upper, 0.0)
        lower = score_values(family, safe, theta0, coordinate) - reference
        result = (
            np.asarray(f0.eval(safe + 1)) * ratio * upper - np.asarray(f0.eval(safe)) * lower
        ) / math.exp(origin)
    return np.where(inside, result, 0.0)


def _endpoint_speeds(
    family: ParametricFamily, theta0: Theta, coordinate: int
) -> tuple[float, float]:
    h = step_size(theta0[coordinate])
    upper = family.support_fn(_moved(theta0, coordinate, theta0[coordinate] + h))
    lower = family.support_fn(_moved(theta0, coordinate, theta0[coordinate] - h))
    with np.errstate(all="ignore"):
        speeds = ((upper.lo - lower.lo) / (2 * h), (upper.hi - lower.hi) / (2 * h))
    return tuple(0.0 if not math.isfinite(speed) else speed for speed in speeds)


def generic_boundary(
    family: ParametricFamily,
    theta0: Theta,
    form: TwoArgument,
    law: ParametrizedLaw,
    coordinates: tuple[int, ...] | None = None,
) -> np.ndarray:
    """Return -a' f(a) h(a+) + b' f(b) h(b-) for the moving endpoints a, b of the support.

    Adding it to the expectation of the generic operator under g(.;theta0) gives 0 for
    admissible test functions. Fixed, infinite and discrete endpoints contribute nothing.

    Args:
        family (ParametricFamily): The family.
        theta0 (Theta): The parameter.
        form (TwoArgument): The two-argument form.
        law (ParametrizedLaw): The law whose one-sided density h weights the endpoints.
        coordinates (tuple[int, ...] | None, optional): The parameter coordinates to keep.
            Defaults to all of them.

    Returns:
        np.ndarray: One value per kept coordinate.
    """
    coordinates = tuple(range(len(theta0))) if coordinates is None else coordinates
    support = family.support_fn(theta0)
    result = np.zeros(len(coordinates))
    if family.discrete:
        return result

    for index, coordinate in enumerate(coordinates):
        lo_speed, hi_speed = _endpoint_speeds(family, theta0, coordinate)
        if lo_speed and math.isfinite(support.lo):
            a = math.nextafter(support.lo, math.inf)
            mass = law.one_sided_density(support.lo, 1)
            result[index] -= lo_speed * float(form(a, theta0)) * mass
        if hi_speed and math.isfinite(support.hi):
            b = math.nextafter(support.hi, -math.inf)
            mass = law.one_sided_density(support.hi, -1)
            result[index] += hi_speed * float(form(b, theta0)) * mass
    return result


def location_boundary(
    family: ParametricFamily, theta0: Theta, f0: TestFunction, law: ParametrizedLaw
) -> float:
    """Return f0(b - mu0) h(b-) - f0(a - mu0) h(a+) over the finite endpoints of S_theta0.

    Args:
        family (ParametricFamily): A continuous location family.
        theta0 (Theta): The parameter (mu0,).
        f0 (TestFunction): The test function.
        law (ParametrizedLaw): The law whose one-sided density h weights the endpoints.

    Returns:
        float: The boundary functional, 0 without finite endpoints.

    Examples:
        >>> family = builtin("exponential_loc")
        >>> location_boundary(family, (0.0,), constant(), family.at(0.0))
        -1.0
    """
    support = family.support_fn(theta0)
    total = 0.0
    if math.isfinite(support.hi):
        total += float(f0.eval(support.hi - theta0[0])) * law.one_sided_density(support.hi, -1)
    if math.isfinite(support.lo):
        total -= float(f0.eval(support.lo - theta0[0])) * law.one_sided_density(support.lo, 1)
    return total


def scale_boundary(
    family: ParametricFamily, theta0: Theta, f0: TestFunction, law: ParametrizedLaw
) -> float:
    """Return (a f0(sigma0 a) h(a+) - b f0(sigma0 b) h(b-)) / sigma0 over the finite endpoints.

    Endpoints at 0 contribute nothing.

    Args:
        family (ParametricFamily): A continuous scale family.
        theta0 (Theta): The parameter (sigma0,).
        f0 (TestFunction): The test function.
        law (ParametrizedLaw): The law whose one-sided density h weights the endpoints.

    Returns:
        float: The boundary functional.
    """
    support = family.support_fn(theta0)
    sigma = theta0[0]
    total = 0.0
    if math.isfinite(support.lo) and support.lo != 0:
        a = support.lo
        total += a * float(f0.eval(sigma * a)) * law.one_sided_density(a, 1)
    if math.isfinite(support.hi) and support.hi != 0:
        b = support.hi
        total -= b * float(f0.eval(sigma * b)) * law.one_sided_density(b, -1)
    return total / sigma
