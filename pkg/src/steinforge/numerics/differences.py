"""Finite differences on the real line and on the integers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..errors import EvaluationError

# cbrt(machine epsilon), the step factor balancing truncation and rounding for central differences
STEP_FACTOR = float(np.finfo(float).eps) ** (1.0 / 3.0)


def step_size(x: float, scale: float = 1.0) -> float:
    """Return the central-difference step at x.

    Args:
        x (float): The point.
        scale (float, optional): A typical magnitude of the variable. Defaults to 1.0.

    Returns:
        float: cbrt(eps) * max(1, |x|, scale).

    Examples:
        >>> step_size(0.0) == STEP_FACTOR
        True
    """
    return STEP_FACTOR * max(1.0, abs(x), abs(scale))


def central_diff(
    f: Callable[[float], float | np.ndarray],
    x: float,
    scale: float = 1.0,
) -> float | np.ndarray:
    """Differentiate f at x by a symmetric difference.

    f may return an array, in which case every component is differentiated.

    Args:
        f (Callable[[float], float | np.ndarray]): The function.
        x (float): The point.
        scale (float, optional): A typical magnitude of the variable. Defaults to 1.0.

    Returns:
        float | np.ndarray: (f(x+h) - f(x-h)) / (2h) with h = step_size(x, scale).

    Raises:
        EvaluationError: If f returns NaN at x+h or x-h.

    Examples:
        >>> round(central_diff(lambda t: t * t, 3.0), 6)
        6.0
        >>> central_diff(lambda t: 1.0, 2.0)
        0.0
    """
    h = step_size(x, scale)
    # h is made exactly representable around x
    upper, lower = x + h, x - h
    h = 0.5 * (upper - lower)

    with np.errstate(all="ignore"):
        forward = np.asarray(f(upper), dtype=float)
        backward = np.asarray(f(lower), dtype=float)
        derivative = (forward - backward) / (2.0 * h)

    if np.any(np.isnan(derivative)):
        raise EvaluationError(f"NaN in central difference at x={x}", point=x)
    return float(derivative) if derivative.ndim == 0 else derivative


def forward_diff_int(f: Callable[[int], float], x: int) -> float:
    """Return the forward difference f(x+1) - f(x).

    Args:
        f (Callable[[int], float]): A function of an integer.
        x (int): The point.

    Returns:
        float: The forward difference.

    Raises:
        EvaluationError: If f returns NaN.

    Examples:
        >>> forward_diff_int(lambda j: j * j, 2)
        5.0
    """
    value = float(f(x + 1)) - float(f(x))
    if math.isnan(value):
        raise EvaluationError(f"NaN in forward difference at x={x}", point=x)
    return value
