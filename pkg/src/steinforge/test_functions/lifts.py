"""Two-argument forms f(x;theta) built from one-argument test functions f0.

Each operator flavor differentiates a particular two-argument form in the parameter:

- location: f(x;mu) = f0(x - mu)
- scale: f(x;sigma) = f0(sigma x)
- discrete: f(x;theta) = (f0(x+1) g(x+1;theta) - f0(x) g(x;theta)) / (g(x;theta) g(0;theta))
- named: the form registered by the family, such as f0((x - a) / (b - a)) for the uniform family
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from ..errors import ParameterError
from ..families import OperatorFlavor, ParameterRole, ParametricFamily, discrete_lift
from ..utils import assert_positive
from .functions import TestFunction, TwoArgument

logger = logging.getLogger(__name__)


def check_flavor(family: ParametricFamily, flavor: OperatorFlavor | str) -> OperatorFlavor:
    """Validate that a flavor applies to a family.

    Args:
        family (ParametricFamily): The family.
        flavor (OperatorFlavor | str): The flavor.

    Returns:
        OperatorFlavor: The parsed flavor.

    Raises:
        ParameterError: If the flavor is unknown or does not fit the family.

    Examples:
        >>> check_flavor(builtin("poisson_lambda"), "discrete")
        <OperatorFlavor.DISCRETE: 'discrete'>
        >>> check_flavor(builtin("poisson_lambda"), "location")
        Traceback (most recent call last):
            ...
        steinforge.errors.ParameterError: The location flavor needs a continuous location family...
    """
    flavor = OperatorFlavor.parse(flavor)
    if flavor == OperatorFlavor.DISCRETE and not family.discrete:
        raise ParameterError(f"The discrete flavor needs a discrete family, got {family.name}")
    if flavor in (OperatorFlavor.LOCATION, OperatorFlavor.SCALE):
        role = ParameterRole(flavor.value)
        if family.discrete or family.role != role:
            raise ParameterError(
                f"The {flavor.value} flavor needs a continuous {role.value} family, "
                f"got {family.name}"
            )
    if flavor == OperatorFlavor.NAMED and family.lift is None:
        raise ParameterError(f"{family.name} has no named operator")
    return flavor


def _default_flavor(family: ParametricFamily) -> OperatorFlavor | None:
    if family.discrete:
        return OperatorFlavor.DISCRETE
    if family.role == ParameterRole.LOCATION:
        return OperatorFlavor.LOCATION
    if family.role == ParameterRole.SCALE:
        return OperatorFlavor.SCALE
    if family.lift is not None:
        return OperatorFlavor.NAMED
    return None


def lift(
    f0: TestFunction, family: ParametricFamily, flavor: OperatorFlavor | str
) -> TwoArgument:
    """Return the two-argument form of a test function for a flavor.

    For the generic flavor, an explicit two-argument form of f0 wins. Otherwise the form of the
    family's natural flavor is used, and for shape families without a named form the constant
    form f(x;theta) = f0(x).

    Args:
        f0 (TestFunction): The test function.
        family (ParametricFamily): The family.
        flavor (OperatorFlavor | str): The flavor.

    Returns:
        TwoArgument: The form f(x;theta), vectorized in x.

    Raises:
        ParameterError: If the flavor does not fit the family.

    Examples:
        >>> form = lift(identity(), builtin("gaussian_loc"), "location")
        >>> float(form(2.0, (0.5,)))
        1.5
        >>> form = lift(identity(), builtin("gaussian_scale"), "scale")
        >>> float(form(2.0, (3.0,)))
        6.0
    """
    flavor = check_flavor(family, flavor)
    function = f0.function

    if flavor == OperatorFlavor.GENERIC:
        if f0.two_arg_form is not None:
            return f0.two_arg_form
        natural = _default_flavor(family)
        if natural is None:
            logger.debug("Using the parameter-free form of %s for %s", f0.label, family.name)
            return lambda x, theta: function(np.asarray(x, dtype=float))
        return lift(f0, family, natural)

    if flavor == OperatorFlavor.LOCATION:
        return lambda x, theta: function(np.asarray(x, dtype=float) - theta[0])
    if flavor == OperatorFlavor.SCALE:
        return lambda x, theta: function(theta[0] * np.asarray(x, dtype=float))
    if flavor == OperatorFlavor.DISCRETE:
        return discrete_lift(function, family.pdf)
    return family.lift(function)


def with_lift(
    f0: TestFunction, family: ParametricFamily, flavor: OperatorFlavor | str
) -> TestFunction:
    """Return a copy of f0 carrying its two-argument form for a flavor.

    Args:
        f0 (TestFunction): The test function.
        family (ParametricFamily): The family.
        flavor (OperatorFlavor | str): The flavor.

    Returns:
        TestFunction: The copy.
    """
    return f0.with_two_arg_form(lift(f0, family, flavor))


def semicircle_precompose(f1: TestFunction, sigma: float, r: float = 1.0) -> TestFunction:
    """Return f1(t) (sigma^2 - t^2)^r, a test function vanishing at the semicircle endpoints.

    Args:
        f1 (TestFunction): The free factor.
        sigma (float): The semicircle radius.
        r (float, optional): The exponent, above 1/2. Defaults to 1.0.

    Returns:
        TestFunction: The product with its derivative.

    Raises:
        ValueError: If sigma is not positive or r <= 1/2.

    Examples:
        >>> f0 = semicircle_precompose(identity(), 2.0)
        >>> f0.eval(1.0), f0.derivative(1.0)
        (3.0, 1.0)
    """
    assert_positive(sigma, "sigma")
    if not r > 0.5:
        raise ValueError(f"r must exceed 1/2, got {r}")
    square = sigma * sigma

    def weight(t: Any) -> Any:
        return np.maximum(square - np.asarray(t, dtype=float) ** 2, 0.0) ** r

    def weight_derivative(t: Any) -> Any:
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            return -2.0 * r * t * np.maximum(square - t * t, 0.0) ** (r - 1.0)

    label = f"{f1.label}*({sigma:g}^2-x^2)" if r == 1 else f"{f1.label}*({sigma:g}^2-x^2)^{r:g}"
    return f1.weighted(weight, weight_derivative, label)
