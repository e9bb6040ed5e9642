"""The Stein operator record and the pointwise apply functions."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from ..errors import ParameterError
from ..families import (
    OperatorFlavor,
    ParametricFamily,
    ParametrizedLaw,
    Theta,
    builtin,
    get_family,
)
from ..test_functions import TestFunction, TwoArgument, check_flavor, lift
from .closed_forms import ClosedForm, closed_form, closed_form_text
from .flavors import (
    discrete_values,
    generic_boundary,
    generic_values,
    location_boundary,
    location_values,
    scale_boundary,
    scale_values,
)

logger = logging.getLogger(__name__)


def _output(value: Any, x: Any) -> float | np.ndarray:
    value = np.asarray(value, dtype=float)
    return float(value) if np.ndim(x) == 0 else value


@dataclass(frozen=True, eq=False)
class SteinOperator:
    """A Stein operator T_theta0 of a parametric family.

    The operator is an immutable value object. Evaluation is pure and returns exactly 0
    outside S_theta0.

    Examples:
        >>> op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")
        >>> op(identity(), 2.0)
        3.0
        >>> op.to_dict()
        {'family': 'gaussian_loc', 'flavor': 'location', 'theta0': [0.0], 'coordinate': 0}
    """

    family: ParametricFamily
    """The family."""

    flavor: OperatorFlavor
    """The flavor of the operator."""

    theta0: Theta
    """The parameter, interior to the parameter space."""

    coordinate: int = 0
    """The parameter coordinate of the scalar evaluation."""

    coordinates: tuple[int, ...] | None = None
    """The parameter coordinates kept by the vector evaluation, all of them when None."""

    closed_form: ClosedForm | None = None
    """The printed form of the operator, if any."""

    @classmethod
    def create(
        cls,
        family: ParametricFamily,
        theta0: Any = None,
        flavor: OperatorFlavor | str | None = None,
        coordinate: int = 0,
        coordinates: Sequence[int] | None = None,
    ) -> SteinOperator:
        """Build a validated operator.

        Args:
            family (ParametricFamily): The family.
            theta0 (Any, optional): The parameter. Defaults to the family's theta0.
            flavor (OperatorFlavor | str | None, optional): The flavor. Defaults to the family's
                default flavor.
            coordinate (int, optional): The parameter coordinate of the scalar evaluation.
                Defaults to 0.
            coordinates (Sequence[int] | None, optional): The coordinates kept by the vector
                evaluation. Defaults to all of them.

        Returns:
            SteinOperator: The operator.

        Raises:
            ParameterError: If theta0, the flavor or a coordinate is invalid.
        """
        theta0 = family.check_theta(theta0)
        flavor = check_flavor(family, family.default_flavor if flavor is None else flavor)
        dim = len(theta0)
        kept = None if coordinates is None else tuple(int(j) for j in coordinates)
        for j in (coordinate, *(kept or ())):
            if not 0 <= j < dim:
                raise ParameterError(f"coordinate must lie in [0, {dim}), got {j}")
        if kept is not None and not kept:
            raise ParameterError("coordinates must not be empty")
        if flavor in (OperatorFlavor.LOCATION, OperatorFlavor.SCALE) and dim > 1:
            raise ParameterError(f"The {flavor.value} flavor needs a scalar parameter")
        return cls(family, flavor, theta0, coordinate, kept, closed_form(family, flavor))

    @property
    def law(self) -> ParametrizedLaw:
        """Return the target law g(.;theta0)."""
        return ParametrizedLaw(self.family, self.theta0)

    @property
    def text(self) -> str:
        """Return the plain-text form of the operator."""
        return closed_form_text(self.family, self.flavor)

    def lifted(self, f0: TestFunction) -> TwoArgument:
        """Return the two-argument form differentiated by the operator.

        The generic flavor keeps an explicit two-argument form of f0.
        """
        return lift(f0, self.family, self.flavor)

    def vector(self, f0: TestFunction, x: Any) -> np.ndarray:
        """Evaluate the parameter-derivative operator on the kept coordinates.

        Args:
            f0 (TestFunction): The test function.
            x (Any): A point or an array of points.

        Returns:
            np.ndarray: The values, with a trailing axis of one entry per kept coordinate.
        """
        return generic_values(self.family, self.theta0, self.lifted(f0), x, self.coordinates)

    def values(self, f0: TestFunction, x: Any) -> float | np.ndarray:
        """Evaluate the scalar operator T f0.

        Named operators use their printed form when one exists. Generic operators return
        the coordinate of the scalar evaluation.

        Args:
            f0 (TestFunction): The test function.
            x (Any): A point or an array of points.

        Returns:
            float | np.ndarray: The values, a float for a scalar x.

        Raises:
            BoundaryError: If a location or scale operator hits a singular endpoint.
            DegenerateDensityError: If the density vanishes inside the support.
        """
        family, theta0 = self.family, self.theta0
        if self.flavor == OperatorFlavor.LOCATION:
            return _output(location_values(family, theta0, f0, x), x)
        if self.flavor == OperatorFlavor.SCALE:
            return _output(scale_values(family, theta0, f0, x), x)
        if self.flavor == OperatorFlavor.DISCRETE:
            return _output(discrete_values(family, theta0, f0, x, self.coordinate), x)
        if self.flavor == OperatorFlavor.NAMED and self.closed_form is not None:
            return self.closed_form(family, theta0, f0, x)

        column = generic_values(family, theta0, self.lifted(f0), x, (self.coordinate,))
        return _output(column[..., 0], x)

    __call__ = values

    def boundary(self, f0: TestFunction, law: ParametrizedLaw | None = None) -> float:
        """Return the boundary functional added to expectations of the operator.

        It collects the endpoint terms of the distributional derivative, weighted by the
        one-sided density of the law at the endpoints of S_theta0.

        Args:
            f0 (TestFunction): The test function.
            law (ParametrizedLaw | None, optional): The law of the data. Defaults to the
                target law.

        Returns:
            float: The boundary functional, 0 for discrete operators.

        Examples:
            >>> op = SteinOperator.create(builtin("exponential_loc"), 0.0, "location")
            >>> op.boundary(constant())
            -1.0
        """
        law = self.law if law is None else law
        family, theta0 = self.family, self.theta0
        if self.flavor == OperatorFlavor.LOCATION:
            return location_boundary(family, theta0, f0, law)
        if self.flavor == OperatorFlavor.SCALE:
            return scale_boundary(family, theta0, f0, law)
        if self.flavor == OperatorFlavor.DISCRETE:
            return 0.0
        if self.closed_form is not None and self.closed_form.includes_boundary:
            return 0.0

        form = self.lifted(f0)
        return float(generic_boundary(family, theta0, form, law, (self.coordinate,))[0])

    def to_dict(self) -> dict:
        """Return the JSON descriptor of the operator."""
        descriptor = {
            "family": self.family.name,
            "flavor": self.flavor.value,
            "theta0": list(self.theta0),
            "coordinate": self.coordinate,
        }
        if self.coordinates is not None:
            descriptor["coordinates"] = list(self.coordinates)
        return descriptor

    @classmethod
    def from_dict(
        cls, descriptor: Mapping[str, Any], family: ParametricFamily | None = None
    ) -> SteinOperator:
        """Rebuild an operator from its JSON descriptor.

        Args:
            descriptor (Mapping[str, Any]): The descriptor.
            family (ParametricFamily | None, optional): The family, resolved by name in the
                catalog when omitted.

        Returns:
            SteinOperator: The operator.

        Raises:
            ParameterError: If the descriptor is malformed.
            CatalogError: If the family is unknown.
        """
        try:
            name = descriptor["family"]
        except (KeyError, TypeError) as e:
            raise ParameterError(f"An operator descriptor needs a family, got {descriptor}") from e
        family = get_family(name) if family is None else family
        return cls.create(
            family,
            descriptor.get("theta0"),
            descriptor.get("flavor"),
            int(descriptor.get("coordinate", 0)),
            descriptor.get("coordinates"),
        )

    def __str__(self) -> str:
        values = ", ".join(f"{value:g}" for value in self.theta0)
        return f"T[{self.flavor.value}]({self.family.label}; theta0=({values}))"


def generic_apply(
    family: ParametricFamily,
    theta0: Any,
    f: TestFunction | TwoArgument,
    x: Any,
    coordinates: Sequence[int] | None = None,
) -> np.ndarray:
    """Evaluate the parameter-derivative operator grad_theta (f g) / g at theta0.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter.
        f (TestFunction | TwoArgument): A two-argument form f(x;theta), or a test function
            lifted to the family's natural form.
        x (Any): A point or an array of points.
        coordinates (Sequence[int] | None, optional): The coordinates to keep. Defaults to all.

    Returns:
        np.ndarray: The values, with a trailing axis of one entry per kept coordinate.

    Raises:
        DegenerateDensityError: If g(x;theta0) = 0 inside the support.

    Examples:
        >>> generic_apply(builtin("gaussian_loc"), 0.0, identity(), 2.0)
        array([3.])
    """
    op = SteinOperator.create(family, theta0, OperatorFlavor.GENERIC, coordinates=coordinates)
    if isinstance(f, TestFunction):
        return op.vector(f, x)
    return generic_values(family, op.theta0, f, x, op.coordinates)


def location_apply(
    family: ParametricFamily, theta0: Any, f0: TestFunction, x: Any
) -> float | np.ndarray:
    """Evaluate the location operator -(f0'(x - mu0) + f0(x - mu0) g'/g(x)).

    Examples:
        >>> location_apply(builtin("gaussian_loc"), 0.0, identity(), 2.0)
        3.0
    """
    return SteinOperator.create(family, theta0, OperatorFlavor.LOCATION).values(f0, x)


def scale_apply(
    family: ParametricFamily, theta0: Any, f0: TestFunction, x: Any
) -> float | np.ndarray:
    """Evaluate the scale operator x f0'(sigma0 x) + f0(sigma0 x) (1/sigma0 + x g'/g / sigma0).

    Examples:
        >>> scale_apply(builtin("gaussian_scale"), 1.0, identity(), 2.0)
        -4.0
    """
    return SteinOperator.create(family, theta0, OperatorFlavor.SCALE).values(f0, x)


def discrete_apply(
    family: ParametricFamily, theta0: Any, f0: TestFunction, x: Any
) -> float | np.ndarray:
    """Evaluate the discrete operator Delta+ (f0 psi) / g.

    Examples:
        >>> discrete_apply(builtin("geometric_p"), 0.5, constant(), 0)
        -2.0
    """
    return SteinOperator.create(family, theta0, OperatorFlavor.DISCRETE).values(f0, x)


def named_apply(
    name: str, params: Mapping[str, Any] | None, f0: TestFunction, x: Any
) -> float | np.ndarray:
    """Evaluate the named operator of a builtin family.

    Args:
        name (str): The builtin family name.
        params (Mapping[str, Any] | None): The construction parameters and the parameter of
            interest under its name, such as {"a": 0.0, "b": 1.0} for uniform_a.
        f0 (TestFunction): The test function.
        x (Any): A point or an array of points.

    Returns:
        float | np.ndarray: The values of the printed form.

    Raises:
        ParameterError: If a parameter is invalid or the family has no named operator.
        CatalogError: If the family is unknown.

    Examples:
        >>> named_apply("uniform_a", {"a": 0.0, "b": 1.0}, identity(), 0.5)
        0.0
    """
    params = dict(params or {})
    family = builtin(name)
    theta = tuple(params.pop(key) for key in family.param_names if key in params)
    family = builtin(name, params)
    theta0 = family.check_theta(theta if len(theta) == len(family.param_names) else None)
    return SteinOperator.create(family, theta0, OperatorFlavor.NAMED).values(f0, x)
