"""Exchanging functions and the consistency of the parameter and spatial derivative forms.

An operator built from a parameter derivative can be rewritten as a spatial derivative:

    d/dtheta (f(x;theta) g(x;theta)) at theta0 = d/dy (E(y) g(y;theta0)) at y = x

with the exchanging function E of the flavor:

- location: E(y) = -f0(y - mu0)
- scale: E(y) = y f0(sigma0 y) / sigma0
- discrete: E(x) = f0(x) psi(x;theta0) / g(x;theta0), with a forward difference in x
"""

from __future__ import annotations

import logging
from typing import Any, Callable

import numpy as np

from ..errors import ParameterError
from ..families import OperatorFlavor, interior_grid, psi
from ..numerics import central_diff
from ..test_functions import TestFunction
from .flavors import generic_values
from .operator import SteinOperator

logger = logging.getLogger(__name__)

DEFAULT_RECIPE_POINTS = 50
RECIPE_TOL = 1e-6

Exchanging = Callable[[Any], Any]


def exchanging_function(op: SteinOperator, f0: TestFunction) -> Exchanging:
    """Return the exchanging function E of a location, scale or discrete operator.

    Args:
        op (SteinOperator): The operator.
        f0 (TestFunction): The test function.

    Returns:
        Exchanging: E, vectorized in y.

    Raises:
        ParameterError: If the flavor has no exchanging function.

    Examples:
        >>> op = SteinOperator.create(builtin("gaussian_scale"), 2.0, "scale")
        >>> exchanging_function(op, identity())(3.0)
        9.0
    """
    family, theta0 = op.family, op.theta0
    if op.flavor == OperatorFlavor.LOCATION:
        return lambda y: -np.asarray(f0.eval(np.asarray(y, dtype=float) - theta0[0]))
    if op.flavor == OperatorFlavor.SCALE:
        sigma = theta0[0]
        return lambda y: np.asarray(y, dtype=float) * np.asarray(
            f0.eval(sigma * np.asarray(y, dtype=float))
        ) / sigma
    if op.flavor == OperatorFlavor.DISCRETE:

        def exchanging(y):
            values = np.asarray(y, dtype=float)
            kernel = np.asarray(psi(family, values, theta0, op.coordinate), dtype=float)
            density = np.asarray(family.density(values, theta0), dtype=float)
            with np.errstate(all="ignore"):
                ratio = np.where(density > 0, kernel / density, 0.0)
            return np.asarray(f0.eval(values)) * ratio

        return exchanging
    raise ParameterError(f"The {op.flavor.value} flavor has no exchanging function")


def spatial_form(op: SteinOperator, f0: TestFunction, x: Any) -> np.ndarray:
    """Evaluate d/dy (E(y) g(y;theta0)) / g(x;theta0) at the points x.

    Discrete operators use the forward difference. The density ratio is taken in log space.

    Args:
        op (SteinOperator): A location, scale or discrete operator.
        f0 (TestFunction): The test function.
        x (Any): Points of the support.

    Returns:
        np.ndarray: The values.
    """
    family, theta0 = op.family, op.theta0
    exchanging = exchanging_function(op, f0)
    points = np.atleast_1d(np.asarray(x, dtype=float))
    result = np.empty_like(points)
    for index, point in enumerate(points):
        base = float(family.log_density(point, theta0))

        def weighted(y: float, base: float = base) -> float:
            return float(exchanging(y)) * float(np.exp(family.log_density(y, theta0) - base))

        if family.discrete:
            result[index] = weighted(point + 1.0) - weighted(point)
        else:
            result[index] = central_diff(weighted, float(point))
    return result


def recipe_consistency(
    op: SteinOperator,
    f0: TestFunction,
    grid: Any = None,
    count: int = DEFAULT_RECIPE_POINTS,
) -> float:
    """Return the largest gap between the parameter and the spatial derivative forms.

    The parameter form is the generic operator applied to the flavor's two-argument form.

    Args:
        op (SteinOperator): A location, scale or discrete operator.
        f0 (TestFunction): The test function.
        grid (Any, optional): The points. Defaults to an interior grid of the target law.
        count (int, optional): The number of points of the default grid. Defaults to 50.

    Returns:
        float: The maximum absolute gap, below RECIPE_TOL for consistent recipes.

    Examples:
        >>> op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")
        >>> recipe_consistency(op, identity()) < 1e-6
        True
    """
    points = interior_grid(op.family, op.theta0, count) if grid is None else grid
    points = np.asarray(points, dtype=float)
    by_parameter = generic_values(
        op.family, op.theta0, op.lifted(f0), points, (op.coordinate,)
    )[..., 0]
    by_space = spatial_form(op, f0, points)
    gap = float(np.max(np.abs(by_parameter - by_space))) if points.size else 0.0
    logger.debug("Recipe gap of %s for %s: %.3g", op, f0.label, gap)
    return gap
