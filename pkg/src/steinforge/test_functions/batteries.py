"""Batteries of test functions."""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any

import numpy as np
from numpy.polynomial import hermite_e

from ..errors import ParameterError
from ..families import ParametricFamily
from ..utils import assert_non_negative_integer, get_int
from .functions import TestFunction

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 3
DEFAULT_HERMITE_COUNT = 4

BATTERY_KEYS = {
    "polynomial": {"type", "max_degree", "damping"},
    "hermite": {"type", "count", "damping"},
}

Battery = list[TestFunction]


class Damping(str, Enum):
    """A factor multiplying every member of a battery."""

    NONE = "none"
    GAUSSIAN = "gaussian"


def _parse_damping(damping: Damping | str | None) -> Damping:
    try:
        return Damping(damping or Damping.NONE)
    except ValueError as e:
        raise ParameterError(f"damping must be none or gaussian, got {damping!r}") from e


def _damped(
    values: np.poly1d | hermite_e.HermiteE, damping: Damping, label: str
) -> TestFunction:
    polynomial = values
    derivative = values.deriv()

    if damping == Damping.NONE:
        return TestFunction(
            lambda x: polynomial(np.asarray(x, dtype=float)),
            lambda x: derivative(np.asarray(x, dtype=float)),
            label=label,
        )

    def function(x):
        x = np.asarray(x, dtype=float)
        return polynomial(x) * np.exp(-0.25 * x * x)

    def spatial_derivative(x):
        x = np.asarray(x, dtype=float)
        return (derivative(x) - 0.5 * x * polynomial(x)) * np.exp(-0.25 * x * x)

    return TestFunction(function, spatial_derivative, label=f"{label}*exp(-x^2/4)")


def _monomial_label(degree: int) -> str:
    if degree == 0:
        return "1"
    if degree == 1:
        return "x"
    return f"x^{degree}"


def polynomial_battery(
    max_degree: int = DEFAULT_MAX_DEGREE, damping: Damping | str | None = None
) -> Battery:
    """Return the monomials x^k for k = 0..max_degree, optionally damped by exp(-x^2/4).

    Args:
        max_degree (int, optional): The largest degree. Defaults to 3.
        damping (Damping | str | None, optional): The damping. Defaults to none.

    Returns:
        Battery: The test functions with analytic derivatives.

    Raises:
        ValueError: If max_degree is negative.
        ParameterError: If the damping is unknown.

    Examples:
        >>> [f.label for f in polynomial_battery(2)]
        ['1', 'x', 'x^2']
        >>> polynomial_battery(1, "gaussian")[1].derivative(0.0)
        1.0
    """
    assert_non_negative_integer(max_degree, "max_degree")
    damping = _parse_damping(damping)
    return [
        _damped(np.poly1d([1.0] + [0.0] * degree), damping, _monomial_label(degree))
        for degree in range(max_degree + 1)
    ]


def hermite_battery(
    count: int = DEFAULT_HERMITE_COUNT, damping: Damping | str | None = None
) -> Battery:
    """Return the probabilists' Hermite polynomials He_0, ..., He_{count-1}.

    Args:
        count (int, optional): The number of polynomials. Defaults to 4.
        damping (Damping | str | None, optional): The damping. Defaults to none.

    Returns:
        Battery: The test functions with analytic derivatives.

    Raises:
        ValueError: If count is negative.

    Examples:
        >>> battery = hermite_battery(3)
        >>> battery[2].eval(2.0)
        3.0
    """
    assert_non_negative_integer(count, "count")
    damping = _parse_damping(damping)
    battery = []
    for degree in range(count):
        coefficients = [0.0] * degree + [1.0]
        battery.append(_damped(hermite_e.HermiteE(coefficients), damping, f"He{degree}"))
    return battery


def battery_from_spec(spec: dict | None) -> Battery:
    """Build a battery from a configuration object.

    Accepted forms are {"type": "polynomial", "max_degree": 3, "damping": "gaussian"} and
    {"type": "hermite", "count": 4, "damping": "none"}.

    Args:
        spec (dict | None): The configuration. Defaults to the damped cubic polynomials.

    Returns:
        Battery: The battery.

    Raises:
        ParameterError: If the specification is malformed.

    Examples:
        >>> len(battery_from_spec({"type": "hermite", "count": 2}))
        2
    """
    if spec is None:
        return polynomial_battery(DEFAULT_MAX_DEGREE, Damping.GAUSSIAN)
    if not isinstance(spec, dict):
        raise ParameterError(f"A battery spec must be an object, got {spec!r}")

    kind = spec.get("type", "polynomial")
    if kind not in BATTERY_KEYS:
        raise ParameterError(f"Unknown battery type {kind!r}, expected polynomial or hermite")
    unknown = sorted(set(spec) - BATTERY_KEYS[kind])
    if unknown:
        raise ParameterError(f"Unknown battery keys: {', '.join(unknown)}")

    try:
        if kind == "hermite":
            count = get_int(spec.get("count", DEFAULT_HERMITE_COUNT), -1)
            return hermite_battery(count, spec.get("damping"))
        max_degree = get_int(spec.get("max_degree", DEFAULT_MAX_DEGREE), -1)
        return polynomial_battery(max_degree, spec.get("damping", Damping.GAUSSIAN))
    except ValueError as e:
        raise ParameterError(f"Invalid battery spec {spec}: {e}") from e


def adapt_battery(battery: Battery, family: ParametricFamily) -> Battery:
    """Premultiply a battery by the family's weight, for densities vanishing at their endpoints.

    For the semicircle family the members become f1(t) (sigma^2 - t^2).

    Args:
        battery (Battery): The battery.
        family (ParametricFamily): The target family.

    Returns:
        Battery: The adapted battery, unchanged when the family has no weight.
    """
    if family.battery_weight is None:
        return list(battery)
    weight, weight_derivative = family.battery_weight
    logger.debug("Weighting %d test functions for %s", len(battery), family.name)
    return [member.weighted(weight, weight_derivative, f"w*{member.label}") for member in battery]


def battery_to_dict(battery: Battery) -> list[dict[str, Any]]:
    """Describe a battery.

    Args:
        battery (Battery): The battery.

    Returns:
        list[dict[str, Any]]: One description per member.
    """
    return [member.to_dict() for member in battery]
