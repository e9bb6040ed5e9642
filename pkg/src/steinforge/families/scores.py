"""Scores, probabilities and quantiles of parametric families."""

from __future__ import annotations

import logging
import math
from typing import Any, Sequence

import numpy as np
from scipy import optimize

from ..errors import DegenerateDensityError, SupportError
from ..numerics import (
    Domain,
    Interval,
    IntRange,
    central_diff,
    integrate,
    sum_series,
)
from ..numerics.differences import STEP_FACTOR
from .base_family import ParametricFamily, Theta

logger = logging.getLogger(__name__)


def _with_coordinate(theta: Theta, coordinate: int, value: float) -> Theta:
    moved = list(theta)
    moved[coordinate] = value
    return tuple(moved)


def score_values(
    family: ParametricFamily,
    x: Any,
    theta: Theta,
    coordinate: int = 0,
) -> np.ndarray:
    """Return one coordinate of the parameter score at many points, without support checks.

    The analytic score is used when registered, otherwise a central difference of the
    log-density in the parameter.

    Args:
        family (ParametricFamily): The family.
        x (Any): The points.
        theta (Theta): The parameter.
        coordinate (int, optional): The parameter coordinate. Defaults to 0.

    Returns:
        np.ndarray: The score values, with the shape of x.
    """
    values = np.asarray(x, dtype=float)
    if family.score is not None:
        with np.errstate(all="ignore"):
            score = np.asarray(family.score(values, theta), dtype=float)
        if family.param_space.dim > 1:
            score = score[..., coordinate]
        return np.broadcast_to(score, values.shape).copy()

    def log_density(u: float) -> np.ndarray:
        return np.asarray(
            family.log_density(values, _with_coordinate(theta, coordinate, u)), dtype=float
        )

    return np.asarray(central_diff(log_density, theta[coordinate]), dtype=float)


def param_score(family: ParametricFamily, x: float, theta: Any = None) -> np.ndarray:
    """Return the parameter score d/dtheta g(x;theta) / g(x;theta).

    Args:
        family (ParametricFamily): The family.
        x (float): A point of the support.
        theta (Any, optional): An interior parameter. Defaults to theta0.

    Returns:
        np.ndarray: One score per parameter coordinate.

    Raises:
        SupportError: If x lies outside the support.
        DegenerateDensityError: If g(x;theta) = 0 inside the support.

    Examples:
        >>> param_score(builtin("gaussian_loc"), 2.0, 0.0)
        array([2.])
        >>> param_score(builtin("poisson_lambda"), 3, 1.0)
        array([2.])
    """
    theta = family.check_theta(theta)
    if not family.support_fn(theta).contains(x):
        raise SupportError(f"x={x} lies outside the support {family.support_fn(theta)}")
    if family.density(x, theta) == 0:
        raise DegenerateDensityError(f"{family.name} vanishes at x={x} inside its support")
    return np.array(
        [float(score_values(family, x, theta, j)) for j in range(family.param_space.dim)]
    )


def spatial_values(family: ParametricFamily, x: Any, theta: Theta) -> np.ndarray:
    """Return the spatial score d/dx log g(x;theta) at many points, without support checks.

    Args:
        family (ParametricFamily): A continuous family.
        x (Any): The points.
        theta (Theta): The parameter.

    Returns:
        np.ndarray: The spatial score, inf or nan where the log-density is singular.
    """
    values = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        if family.x_score is not None:
            score = np.asarray(family.x_score(values, theta), dtype=float)
            return np.broadcast_to(score, values.shape).copy()

        h = STEP_FACTOR * np.maximum(1.0, np.abs(values))
        upper = np.asarray(family.log_density(values + h, theta), dtype=float)
        lower = np.asarray(family.log_density(values - h, theta), dtype=float)
        return (upper - lower) / (2.0 * h)


def spatial_score(family: ParametricFamily, x: float, theta: Any = None) -> float:
    """Return the spatial score d/dx log g(x;theta) at a point of the support.

    Args:
        family (ParametricFamily): A continuous family.
        x (float): A point of the support.
        theta (Any, optional): The parameter. Defaults to theta0.

    Returns:
        float: The spatial score.

    Raises:
        SupportError: If x lies outside the support.
        ValueError: If the family is discrete.

    Examples:
        >>> spatial_score(builtin("gaussian_loc"), 2.0, 0.0)
        -2.0
    """
    if family.discrete:
        raise ValueError(f"Spatial scores need a continuous family, got {family.name}")
    theta = family.check_theta(theta)
    if not family.support_fn(theta).contains(x):
        raise SupportError(f"x={x} lies outside the support {family.support_fn(theta)}")
    return float(spatial_values(family, x, theta))


def psi(family: ParametricFamily, x: Any, theta: Any = None, coordinate: int = 0) -> Any:
    """Return the discrete kernel psi(x;theta) = d/dtheta (g(x;theta) / g(0;theta)).

    It is computed as (g(x) / g(0)) (score(x) - score(0)) with the density ratio taken in log
    space, and vanishes outside the support.

    Args:
        family (ParametricFamily): A discrete family.
        x (Any): A point or an array of points.
        theta (Any, optional): The parameter. Defaults to theta0.
        coordinate (int, optional): The parameter coordinate. Defaults to 0.

    Returns:
        Any: A float for a scalar x, an array otherwise.

    Raises:
        DegenerateDensityError: If g(0;theta) = 0.

    Examples:
        >>> psi(builtin("poisson_lambda"), 3, 2.0)
        2.0
    """
    theta = family.check_theta(theta)
    values = np.asarray(x, dtype=float)
    log_origin = float(family.log_density(0.0, theta))
    if math.isinf(log_origin):
        raise DegenerateDensityError(f"{family.name} vanishes at 0, psi is undefined")

    inside = family.support_fn(theta).contains(values)
    safe = np.where(inside, values, 0.0)
    with np.errstate(all="ignore"):
        ratio = np.exp(np.asarray(family.log_density(safe, theta), dtype=float) - log_origin)
        delta = score_values(family, safe, theta, coordinate) - float(
            score_values(family, 0.0, theta, coordinate)
        )
        result = np.where(inside, ratio * delta, 0.0)
    return float(result) if np.ndim(x) == 0 else result


def _regions(region: Domain | Sequence[Domain]) -> list[Domain]:
    if isinstance(region, (Interval, IntRange)):
        return [region]
    return list(region)


def probability(
    family: ParametricFamily,
    theta: Any,
    region: Domain | Sequence[Domain],
) -> float:
    """Return P_theta(X in region) for a domain or a union of disjoint domains.

    The distribution function is used when registered, otherwise the density is integrated or
    summed over the part of the region inside the support.

    Args:
        family (ParametricFamily): The family.
        theta (Any): The parameter.
        region (Domain | Sequence[Domain]): The region.

    Returns:
        float: The probability.

    Examples:
        >>> round(probability(builtin("gaussian_loc"), 0.0, Interval(-math.inf, 0.0)), 12)
        0.5
        >>> round(probability(builtin("poisson_lambda"), 1.0, IntRange(0, 0)), 10)
        0.3678794412
    """
    theta = family.check_theta(theta)
    support = family.support_fn(theta)
    total = 0.0
    for part in _regions(region):
        if family.discrete:
            total += _discrete_probability(family, theta, support, part)
        else:
            total += _continuous_probability(family, theta, support, part)
    return min(1.0, max(0.0, total))


def _continuous_probability(
    family: ParametricFamily, theta: Theta, support: Domain, part: Domain
) -> float:
    interval = Interval(part.lo, part.hi).intersect(Interval(support.lo, support.hi))
    if interval is None or not interval.has_interior:
        return 0.0
    if family.cdf is not None:
        upper = 1.0 if math.isinf(interval.hi) else float(family.cdf(interval.hi, theta))
        lower = 0.0 if math.isinf(interval.lo) else float(family.cdf(interval.lo, theta))
        return upper - lower
    return integrate(lambda t: family.density(t, theta), interval, abs_tol=1e-12).value


def _discrete_probability(
    family: ParametricFamily, theta: Theta, support: Domain, part: Domain
) -> float:
    lo = math.ceil(part.lo) if math.isfinite(part.lo) else support.lo
    hi = math.floor(part.hi) if math.isfinite(part.hi) else part.hi
    if hi < lo:
        return 0.0
    points = IntRange(lo, hi).intersect(IntRange(support.lo, support.hi))
    if points is None:
        return 0.0
    if family.cdf is not None:
        upper = 1.0 if math.isinf(points.hi) else float(family.cdf(points.hi, theta))
        lower = float(family.cdf(points.lo - 1, theta)) if points.lo > support.lo else 0.0
        return upper - lower
    return sum_series(lambda j: family.density(j, theta), points, abs_tol=1e-13).value


def quantile(family: ParametricFamily, theta: Any, q: float) -> float:
    """Return the q-quantile of g(.;theta).

    Args:
        family (ParametricFamily): The family.
        theta (Any): The parameter.
        q (float): A level in (0, 1).

    Returns:
        float: The smallest x with P(X <= x) >= q.

    Raises:
        ValueError: If q is not in (0, 1).

    Examples:
        >>> quantile(builtin("gaussian_loc"), 0.0, 0.5)
        0.0
        >>> quantile(builtin("poisson_lambda"), 1.0, 0.5)
        1.0
    """
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    theta = family.check_theta(theta)
    support = family.support_fn(theta)

    if family.ppf is not None and not family.discrete:
        return float(family.ppf(q, theta))

    if family.discrete:
        cumulative = 0.0
        for j in support.points():
            if family.cdf is not None:
                cumulative = float(family.cdf(j, theta))
            else:
                cumulative += float(family.density(j, theta))
            if cumulative >= q:
                return float(j)
        return float(support.hi)

    def excess(t: float) -> float:
        return probability(family, theta, Interval(-math.inf, t)) - q

    lo, hi = _bracket(support, excess)
    return float(optimize.brentq(excess, lo, hi, xtol=1e-12))


def _bracket(support: Interval, excess) -> tuple[float, float]:
    lo = support.lo if math.isfinite(support.lo) else -1.0
    hi = support.hi if math.isfinite(support.hi) else 1.0
    while math.isinf(support.lo) and excess(lo) > 0:
        lo *= 2
    while math.isinf(support.hi) and excess(hi) < 0:
        hi *= 2
    return lo, hi


def normalization_defect(family: ParametricFamily, theta: Any) -> float:
    """Return |total mass - 1| computed from the density, ignoring any registered CDF.

    Args:
        family (ParametricFamily): The family.
        theta (Any): The parameter.

    Returns:
        float: The defect.
    """
    theta = family.check_theta(theta)
    support = family.support_fn(theta)
    if family.discrete:
        total = sum_series(lambda j: family.density(j, theta), support, abs_tol=1e-14).value
    else:
        total = integrate(
            lambda t: family.density(t, theta), support, abs_tol=1e-12, rel_tol=1e-12
        ).value
    logger.debug("Mass of %s at theta=%s: %.15g", family.name, theta, total)
    return abs(total - 1.0)


def interior_grid(family: ParametricFamily, theta: Any, count: int) -> np.ndarray:
    """Return evaluation points covering the bulk of g(.;theta).

    Continuous families get the quantiles at levels 0.02 to 0.98 that lie in the open support.
    Discrete families get the first support points up to the 0.999 quantile.

    Args:
        family (ParametricFamily): The family.
        theta (Any): The parameter.
        count (int): The maximum number of points.

    Returns:
        np.ndarray: The sorted points.

    Examples:
        >>> interior_grid(builtin("poisson_lambda"), 1.0, 3)
        array([0., 1., 2.])
    """
    theta = family.check_theta(theta)
    support = family.support_fn(theta)
    if family.discrete:
        top = min(support.hi, quantile(family, theta, 0.999))
        return np.array(list(IntRange(support.lo, top).points(limit=count)), dtype=float)
    levels = np.linspace(0.02, 0.98, count)
    grid = np.array([quantile(family, theta, float(level)) for level in levels])
    return np.unique(grid[Interval(support.lo, support.hi).contains_interior(grid)])
