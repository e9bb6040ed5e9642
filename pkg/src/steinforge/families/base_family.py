"""Parametric density families g(x;theta) and their evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Sequence

import numpy as np

from ..errors import CapabilityError, ParameterError
from ..numerics import Domain, Interval
from ..utils import parse_vector

Theta = tuple[float, ...]
DensityFunction = Callable[[np.ndarray, Theta], np.ndarray]
SupportFunction = Callable[[Theta], Domain]
Sampler = Callable[[np.random.Generator, int, Theta], np.ndarray]
Lift = Callable[[Callable[[Any], Any]], Callable[[Any, Theta], Any]]


class FamilyKind(str, Enum):
    """The dominating measure of a family."""

    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class ParameterRole(str, Enum):
    """How the parameter of interest acts on the density."""

    LOCATION = "location"
    SCALE = "scale"
    SHAPE = "shape"


class OperatorFlavor(str, Enum):
    """The construction used to build a Stein operator from a test function."""

    GENERIC = "generic"
    LOCATION = "location"
    SCALE = "scale"
    DISCRETE = "discrete"
    NAMED = "named"

    @classmethod
    def parse(cls, value: Any) -> OperatorFlavor:
        """Parse a flavor name.

        Args:
            value (Any): The name, case-insensitive.

        Returns:
            OperatorFlavor: The flavor.

        Raises:
            ParameterError: If the name is unknown.

        Examples:
            >>> OperatorFlavor.parse("Scale")
            <OperatorFlavor.SCALE: 'scale'>
        """
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as e:
            names = ", ".join(flavor.value for flavor in cls)
            raise ParameterError(f"flavor must be one of {names}, got {value!r}") from e


def _output(value: np.ndarray, x: Any) -> float | np.ndarray:
    return float(value) if np.ndim(x) == 0 else value


@dataclass(frozen=True)
class ParamSpace:
    """A box-shaped parameter space Theta in R^p.

    Examples:
        >>> space = ParamSpace((Interval(0.0, math.inf),))
        >>> space.dim
        1
        >>> space.contains_interior((1.0,))
        True
        >>> space.neighborhood((0.05,), 0.1)
        (Interval(lo=0.025, hi=0.15),)
    """

    box: tuple[Interval, ...]
    """One interval per coordinate."""

    def __post_init__(self) -> None:
        if not self.box:
            raise ValueError("A parameter space needs at least one coordinate")
        for interval in self.box:
            if not interval.has_interior:
                raise ValueError(f"Parameter interval {interval} has an empty interior")
        object.__setattr__(self, "box", tuple(self.box))

    @property
    def dim(self) -> int:
        """Return the number of parameter coordinates."""
        return len(self.box)

    def contains_interior(self, theta: Sequence[float]) -> bool:
        """Test whether theta lies in the interior of the box.

        Args:
            theta (Sequence[float]): The parameter.

        Returns:
            bool: True when every coordinate is strictly inside its interval.
        """
        return len(theta) == self.dim and all(
            interval.contains_interior(value) for interval, value in zip(self.box, theta)
        )

    def neighborhood(self, theta0: Sequence[float], radius: float) -> tuple[Interval, ...]:
        """Return a rectangular neighborhood of theta0 kept inside the interior.

        A coordinate whose radius would cross a finite bound is shrunk to half the distance to
        that bound.

        Args:
            theta0 (Sequence[float]): The center.
            radius (float): The half-width per coordinate.

        Returns:
            tuple[Interval, ...]: One interval per coordinate.
        """
        intervals = []
        for interval, center in zip(self.box, theta0):
            lo = center - radius
            hi = center + radius
            if lo <= interval.lo:
                lo = center - 0.5 * (center - interval.lo)
            if hi >= interval.hi:
                hi = center + 0.5 * (interval.hi - center)
            intervals.append(Interval(lo, hi))
        return tuple(intervals)

    def probes(self, theta0: Sequence[float], radius: float, count: int) -> list[Theta]:
        """Return equispaced parameter probes across the neighborhood of theta0.

        Each coordinate is varied in turn while the others stay at theta0.

        Args:
            theta0 (Sequence[float]): The center.
            radius (float): The half-width per coordinate.
            count (int): The number of probes per coordinate.

        Returns:
            list[Theta]: The probes, theta0 included when count is odd.
        """
        probes: list[Theta] = []
        for coordinate, interval in enumerate(self.neighborhood(theta0, radius)):
            for value in np.linspace(interval.lo, interval.hi, count):
                theta = list(theta0)
                theta[coordinate] = float(value)
                probes.append(tuple(theta))
        return probes

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"dim": self.dim, "box": [interval.to_dict() for interval in self.box]}


def default_radius(theta0: Sequence[float]) -> float:
    """Return the default neighborhood radius max(0.1, 0.1 |theta0|).

    Args:
        theta0 (Sequence[float]): The center.

    Returns:
        float: The radius.

    Examples:
        >>> default_radius((5.0,))
        0.5
    """
    return max(0.1, 0.1 * max(abs(value) for value in theta0))


@dataclass(frozen=True, eq=False, kw_only=True)
class ParametricFamily:
    """A family of theta-parametric densities g(x;theta) with respect to Lebesgue or counting
    measure.

    The raw callables receive numpy arrays and parameter tuples. Public methods validate the
    parameter, enforce the support convention (density exactly 0 outside the support) and return
    Python floats for scalar input.

    Examples:
        >>> family = builtin("gaussian_loc")
        >>> round(family.density(0.0, (0.0,)), 10)
        0.3989422804
        >>> family.support((0.0,))
        Interval(lo=-inf, hi=inf)
        >>> family.density(0.0, (math.inf,))
        Traceback (most recent call last):
            ...
        steinforge.errors.ParameterError: theta must lie in the interior of ...
    """

    name: str
    """The catalog name."""

    kind: FamilyKind
    """Continuous (Lebesgue) or discrete (counting measure)."""

    param_space: ParamSpace
    """The parameter space Theta."""

    pdf: DensityFunction
    """The raw density g(x;theta), vectorized in x."""

    support_fn: SupportFunction
    """The support S_theta."""

    default_theta: Theta
    """The default theta0."""

    param_names: tuple[str, ...] = ("theta",)
    """The names of the parameter coordinates."""

    role: ParameterRole = ParameterRole.SHAPE
    """How the parameter of interest acts."""

    default_flavor: str = "generic"
    """The flavor of the characterizing operator used by default."""

    params: dict[str, Any] = field(default_factory=dict)
    """The fixed construction parameters, such as sigma for a location family."""

    registration_box: tuple[Interval, ...] | None = None
    """A finite box of parameters where normalization is checked."""

    logpdf: DensityFunction | None = None
    """The log-density, more accurate in the tails than log(pdf)."""

    score: Callable[[np.ndarray, Theta], np.ndarray] | None = None
    """The analytic parameter score d/dtheta log g, shape (..., p) or (...) when p = 1."""

    x_score: DensityFunction | None = None
    """The analytic spatial score d/dx log g."""

    cdf: DensityFunction | None = None
    """The distribution function P(X <= x)."""

    ppf: DensityFunction | None = None
    """The quantile function."""

    sampler: Sampler | None = None
    """A direct sampler, used for discrete families."""

    lift: Lift | None = None
    """The two-argument form f(x;theta) of the named operator built from f0."""

    battery_weight: tuple[Callable, Callable] | None = None
    """A weight w and its derivative w' premultiplying test functions, for densities vanishing at
    their endpoints."""

    label: str = ""
    """A human-readable label."""

    def __post_init__(self) -> None:
        if len(self.default_theta) != self.param_space.dim:
            raise ValueError(f"default_theta of {self.name} does not match the parameter space")
        if len(self.param_names) != self.param_space.dim:
            raise ValueError(f"param_names of {self.name} do not match the parameter space")
        if not self.label:
            params = ", ".join(f"{key}={value}" for key, value in self.params.items())
            object.__setattr__(self, "label", f"{self.name}({params})")

    @property
    def discrete(self) -> bool:
        """Return True for families with respect to counting measure."""
        return self.kind == FamilyKind.DISCRETE

    @property
    def has_sampler(self) -> bool:
        """Return True when samples can be drawn."""
        return self.sampler is not None or self.ppf is not None

    def check_theta(self, theta: Any = None) -> Theta:
        """Validate a parameter and return it as a tuple.

        Args:
            theta (Any, optional): A number, a sequence or a comma-separated string. Defaults to
                the default theta0.

        Returns:
            Theta: The parameter.

        Raises:
            ParameterError: If theta is malformed or not interior to the parameter space.
        """
        if theta is None:
            return self.default_theta
        if isinstance(theta, tuple) and all(isinstance(value, float) for value in theta):
            vector = theta
        else:
            try:
                vector = parse_vector(theta, "theta")
            except ValueError as e:
                raise ParameterError(str(e)) from e
        if not self.param_space.contains_interior(vector):
            box = " x ".join(str(interval) for interval in self.param_space.box)
            raise ParameterError(f"theta must lie in the interior of {box}, got {theta}")
        return vector

    def support(self, theta: Any = None) -> Domain:
        """Return the support S_theta.

        Args:
            theta (Any, optional): The parameter. Defaults to theta0.

        Returns:
            Domain: An Interval or an IntRange.
        """
        return self.support_fn(self.check_theta(theta))

    def density(self, x: Any, theta: Any = None) -> float | np.ndarray:
        """Evaluate g(x;theta), exactly 0 outside the support.

        Args:
            x (Any): A point or an array of points.
            theta (Any, optional): The parameter. Defaults to theta0.

        Returns:
            float | np.ndarray: The density values.
        """
        theta = self.check_theta(theta)
        values = np.asarray(x, dtype=float)
        inside = self.support_fn(theta).contains(values)
        with np.errstate(all="ignore"):
            raw = np.asarray(self.pdf(values, theta), dtype=float)
        return _output(np.where(inside, raw, 0.0), x)

    def log_density(self, x: Any, theta: Any = None) -> float | np.ndarray:
        """Evaluate log g(x;theta), -inf outside the support.

        Args:
            x (Any): A point or an array of points.
            theta (Any, optional): The parameter. Defaults to theta0.

        Returns:
            float | np.ndarray: The log-density values.
        """
        theta = self.check_theta(theta)
        values = np.asarray(x, dtype=float)
        inside = self.support_fn(theta).contains(values)
        with np.errstate(all="ignore"):
            if self.logpdf is not None:
                raw = np.asarray(self.logpdf(values, theta), dtype=float)
            else:
                raw = np.log(np.asarray(self.pdf(values, theta), dtype=float))
        return _output(np.where(inside, raw, -np.inf), x)

    def sample(self, rng: np.random.Generator, size: int, theta: Any = None) -> np.ndarray:
        """Draw independent samples from g(.;theta).

        Continuous families sample by inversion of their quantile function.

        Args:
            rng (np.random.Generator): The random generator.
            size (int): The number of samples.
            theta (Any, optional): The parameter. Defaults to theta0.

        Returns:
            np.ndarray: The samples.

        Raises:
            CapabilityError: If the family has neither a sampler nor a quantile function.
        """
        theta = self.check_theta(theta)
        if self.sampler is not None:
            return np.asarray(self.sampler(rng, size, theta), dtype=float)
        if self.ppf is not None:
            return np.asarray(self.ppf(rng.uniform(size=size), theta), dtype=float)
        raise CapabilityError(f"Family {self.name} has no sampler")

    def at(self, theta: Any = None) -> ParametrizedLaw:
        """Bind the family to a parameter.

        Args:
            theta (Any, optional): The parameter. Defaults to theta0.

        Returns:
            ParametrizedLaw: The law g(.;theta).
        """
        return ParametrizedLaw(self, self.check_theta(theta))

    def to_dict(self) -> dict:
        """Return a JSON-friendly description of the family."""
        return {
            "name": self.name,
            "label": self.label,
            "kind": self.kind.value,
            "role": self.role.value,
            "param_names": list(self.param_names),
            "param_space": self.param_space.to_dict(),
            "default_theta": list(self.default_theta),
            "default_flavor": self.default_flavor,
            "params": dict(self.params),
        }

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class ParametrizedLaw:
    """A family bound to a parameter, used as the law of the data or as an alternative.

    Examples:
        >>> law = builtin("poisson_lambda").at(1.2)
        >>> law.label
        'poisson_lambda(lambda=1.2)'
        >>> round(law.density(0), 7)
        0.3011942
    """

    family: ParametricFamily
    """The family."""

    theta: Theta
    """The parameter."""

    @property
    def label(self) -> str:
        """Return a label naming the family and its parameter."""
        values = ", ".join(f"{value:g}" for value in self.theta)
        names = self.family.param_names
        value_text = values if len(names) > 1 else f"{names[0]}={values}"
        return f"{self.family.name}({value_text})"

    @property
    def discrete(self) -> bool:
        """Return True for laws with respect to counting measure."""
        return self.family.discrete

    @property
    def support(self) -> Domain:
        """Return the support of the law."""
        return self.family.support_fn(self.theta)

    def density(self, x: Any) -> float | np.ndarray:
        """Evaluate the density of the law."""
        return self.family.density(x, self.theta)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw independent samples from the law."""
        return self.family.sample(rng, size, self.theta)

    def one_sided_density(self, x: float, side: int) -> float:
        """Return the density limit at x from the left (side < 0) or the right (side > 0).

        Args:
            x (float): The point.
            side (int): The side of the limit.

        Returns:
            float: The one-sided value, 0 when x is infinite.
        """
        if math.isinf(x):
            return 0.0
        towards = math.inf if side > 0 else -math.inf
        return float(self.density(math.nextafter(x, towards)))

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"family": self.family.name, "theta": list(self.theta), "label": self.label}
