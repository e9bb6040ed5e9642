"""The family catalog: builtin factories, custom registration and derived families."""

from __future__ import annotations

import inspect
import logging
import math
import threading
from dataclasses import replace
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from ..errors import CatalogError, ParameterError
from ..numerics import Interval, central_diff
from .base_family import (
    FamilyKind,
    ParameterRole,
    ParametricFamily,
    ParamSpace,
    Theta,
    default_radius,
)
from .builtins import BUILTIN_FACTORIES
from .scores import normalization_defect, probability

logger = logging.getLogger(__name__)

# Mass tolerances of the registration check
CONTINUOUS_MASS_TOL = 1e-8
DISCRETE_MASS_TOL = 1e-10

# Number of parameters checked across the registration box
REGISTRATION_PROBES = 5

_registry: dict[str, ParametricFamily] = {}
_registry_lock = threading.Lock()


def _factory_params(name: str, params: Mapping[str, Any] | Sequence[Any] | None) -> dict:
    factory = BUILTIN_FACTORIES[name]
    if params is None:
        return {}
    names = list(inspect.signature(factory).parameters)
    if isinstance(params, Mapping):
        unknown = sorted(set(params) - set(names))
        if unknown:
            raise ParameterError(f"Unknown parameters for {name}: {', '.join(unknown)}")
        return dict(params)
    if isinstance(params, (str, bytes)):
        raise ParameterError(f"Parameters of {name} must be a mapping or a list, got {params!r}")
    values = list(params)
    if len(values) > len(names):
        raise ParameterError(f"{name} takes at most {len(names)} parameters, got {len(values)}")
    return dict(zip(names, values))


def builtin(
    name: str,
    params: Mapping[str, Any] | Sequence[Any] | None = None,
) -> ParametricFamily:
    """Build a builtin family.

    Args:
        name (str): The family name, see BUILTIN_FACTORIES.
        params (Mapping[str, Any] | Sequence[Any] | None, optional): The fixed parameters, by
            name or by position. Defaults to None.

    Returns:
        ParametricFamily: The family.

    Raises:
        CatalogError: If the name is unknown.
        ParameterError: If the parameters are invalid.

    Examples:
        >>> builtin("gaussian_loc", [1.0]).params
        {'sigma': 1.0}
        >>> builtin("uniform_a", {"b": 1.0}).support(0.0)
        Interval(lo=0.0, hi=1.0)
        >>> builtin("cauchy")
        Traceback (most recent call last):
            ...
        steinforge.errors.CatalogError: 'Unknown family: cauchy'
    """
    if name not in BUILTIN_FACTORIES:
        raise CatalogError(f"Unknown family: {name}")
    kwargs = _factory_params(name, params)
    try:
        return BUILTIN_FACTORIES[name](**kwargs)
    except ParameterError:
        raise
    except (TypeError, ValueError) as e:
        raise ParameterError(f"Invalid parameters for {name}: {e}") from e


def registration_grid(family: ParametricFamily, count: int = REGISTRATION_PROBES) -> list[Theta]:
    """Return the parameters where a family's normalization is checked.

    Args:
        family (ParametricFamily): The family.
        count (int, optional): The number of points per coordinate. Defaults to 5.

    Returns:
        list[Theta]: The grid.
    """
    if family.registration_box is None:
        return family.param_space.probes(
            family.default_theta, default_radius(family.default_theta), count
        )
    grid: list[Theta] = []
    for coordinate, interval in enumerate(family.registration_box):
        for value in np.linspace(interval.lo, interval.hi, count):
            theta = list(family.default_theta)
            theta[coordinate] = float(value)
            grid.append(tuple(theta))
    return grid


def check_normalization(family: ParametricFamily) -> float:
    """Check that a family integrates (or sums) to 1 across its registration grid.

    Args:
        family (ParametricFamily): The family.

    Returns:
        float: The largest defect found.

    Raises:
        ParameterError: If a defect exceeds the mass tolerance.
    """
    tolerance = DISCRETE_MASS_TOL if family.discrete else CONTINUOUS_MASS_TOL
    worst = 0.0
    for theta in registration_grid(family):
        defect = normalization_defect(family, theta)
        if defect > tolerance:
            raise ParameterError(
                f"{family.name} has total mass {1 + defect:.12g} at theta={list(theta)}, "
                "expected 1"
            )
        worst = max(worst, defect)
    return worst


def register_family(family: ParametricFamily, validate: bool = True) -> ParametricFamily:
    """Register a custom family under its name.

    Registration is serialized across threads; a later registration replaces an earlier one.

    Args:
        family (ParametricFamily): The family.
        validate (bool, optional): Whether to check the normalization first. Defaults to True.

    Returns:
        ParametricFamily: The registered family.

    Raises:
        CatalogError: If the name shadows a builtin.
        ParameterError: If the normalization check fails.
    """
    if family.name in BUILTIN_FACTORIES:
        raise CatalogError(f"{family.name} is a builtin family and cannot be replaced")
    if validate:
        check_normalization(family)
    with _registry_lock:
        if family.name in _registry:
            logger.warning("Replacing the registered family %s", family.name)
        _registry[family.name] = family
    return family


def unregister_family(name: str) -> None:
    """Remove a custom family, ignoring unknown names.

    Args:
        name (str): The family name.
    """
    with _registry_lock:
        _registry.pop(name, None)


def get_family(
    name: str,
    params: Mapping[str, Any] | Sequence[Any] | None = None,
) -> ParametricFamily:
    """Return a builtin or registered family by name.

    Args:
        name (str): The family name.
        params (Mapping[str, Any] | Sequence[Any] | None, optional): The fixed parameters of a
            builtin. Defaults to None.

    Returns:
        ParametricFamily: The family.

    Raises:
        CatalogError: If the name is unknown.
        ParameterError: If parameters are given for a registered family.
    """
    if name in BUILTIN_FACTORIES:
        return builtin(name, params)
    with _registry_lock:
        family = _registry.get(name)
    if family is None:
        raise CatalogError(f"Unknown family: {name}")
    if params:
        raise ParameterError(f"Registered family {name} takes no parameters")
    return family


def list_families() -> list[dict]:
    """Describe every builtin and registered family with its default parameters.

    Returns:
        list[dict]: One description per family, sorted by name.
    """
    with _registry_lock:
        custom = list(_registry.values())
    families = [factory() for factory in BUILTIN_FACTORIES.values()] + custom
    descriptions = []
    for family in families:
        description = family.to_dict()
        description["builtin"] = family.name in BUILTIN_FACTORIES
        descriptions.append(description)
    return sorted(descriptions, key=lambda item: item["name"])


def _shifted(function: Callable | None) -> Callable | None:
    if function is None:
        return None
    return lambda x, theta: function(np.asarray(x, dtype=float) - theta[0])


def location_family(
    name: str,
    g0: Callable[[np.ndarray], np.ndarray],
    support: Interval = Interval(-math.inf, math.inf),
    x_score0: Callable[[np.ndarray], np.ndarray] | None = None,
    cdf0: Callable[[np.ndarray], np.ndarray] | None = None,
    ppf0: Callable[[np.ndarray], np.ndarray] | None = None,
    params: Mapping[str, Any] | None = None,
) -> ParametricFamily:
    """Build the location family g0(x - mu) of a base density.

    Args:
        name (str): The family name.
        g0 (Callable[[np.ndarray], np.ndarray]): The vectorized base density.
        support (Interval, optional): The support of g0. Defaults to the real line.
        x_score0 (Callable[[np.ndarray], np.ndarray] | None, optional): g0'/g0.
            Defaults to None.
        cdf0 (Callable[[np.ndarray], np.ndarray] | None, optional): The distribution function
            of g0. Defaults to None.
        ppf0 (Callable[[np.ndarray], np.ndarray] | None, optional): The quantile function of g0.
            Defaults to None.
        params (Mapping[str, Any] | None, optional): Descriptive fixed parameters.
            Defaults to None.

    Returns:
        ParametricFamily: The family.

    Examples:
        >>> laplace = location_family(
        ...     "laplace_loc",
        ...     lambda t: 0.5 * np.exp(-np.abs(t)),
        ...     x_score0=lambda t: -np.sign(t),
        ... )
        >>> param_score(laplace, 2.0, 0.0)
        array([1.])
    """
    x_score = _shifted(x_score0)

    return ParametricFamily(
        name=name,
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((Interval(-math.inf, math.inf),)),
        pdf=lambda x, theta: g0(np.asarray(x) - theta[0]),
        support_fn=lambda theta: Interval(support.lo + theta[0], support.hi + theta[0]),
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params=dict(params or {}),
        score=None if x_score is None else (lambda x, theta: -x_score(x, theta)),
        x_score=x_score,
        cdf=_shifted(cdf0),
        ppf=None if ppf0 is None else (lambda q, theta: ppf0(q) + theta[0]),
    )


def restrict(family: ParametricFamily, interval: Interval) -> ParametricFamily:
    """Restrict a continuous family to a fixed interval and renormalize it.

    The restricted density is g(x;theta) / P_theta(interval) on S_theta intersected with the
    interval. Its parameter score subtracts d/dtheta log P_theta(interval).

    Args:
        family (ParametricFamily): A continuous family.
        interval (Interval): The restriction.

    Returns:
        ParametricFamily: The restricted family, named "<name>|<interval>".

    Raises:
        ValueError: If the family is discrete.
        ParameterError: If the interval has no mass at theta0.

    Examples:
        >>> half = restrict(builtin("gaussian_scale"), Interval(0.0, math.inf))
        >>> round(half.density(0.0, 1.0), 10)
        0.7978845608
    """
    if family.discrete:
        raise ValueError(f"Only continuous families can be restricted, got {family.name}")

    def mass(theta: Theta) -> float:
        return probability(family, theta, interval)

    if mass(family.default_theta) <= 0:
        raise ParameterError(f"{interval} has no mass under {family.label}")

    def support_fn(theta: Theta) -> Interval:
        parent = family.support_fn(theta)
        return parent.intersect(interval) or Interval(interval.lo, interval.lo)

    def log_mass_derivative(theta: Theta) -> np.ndarray:
        derivative = []
        for j in range(len(theta)):

            def log_mass(u: float, j: int = j) -> float:
                moved = list(theta)
                moved[j] = u
                return math.log(mass(tuple(moved)))

            derivative.append(central_diff(log_mass, theta[j]))
        return np.asarray(derivative)

    def score(x, theta):
        correction = log_mass_derivative(theta)
        return family.score(x, theta) - (correction[0] if len(theta) == 1 else correction)

    def cdf(x, theta):
        lower = 0.0 if math.isinf(interval.lo) else family.cdf(interval.lo, theta)
        values = (family.cdf(np.clip(x, interval.lo, interval.hi), theta) - lower) / mass(theta)
        return np.clip(values, 0.0, 1.0)

    def ppf(q, theta):
        lower = 0.0 if math.isinf(interval.lo) else family.cdf(interval.lo, theta)
        return family.ppf(lower + np.asarray(q) * mass(theta), theta)

    return replace(
        family,
        name=f"{family.name}|{interval}",
        pdf=lambda x, theta: family.pdf(x, theta) / mass(theta),
        support_fn=support_fn,
        logpdf=(
            None
            if family.logpdf is None
            else lambda x, theta: family.logpdf(x, theta) - math.log(mass(theta))
        ),
        score=score if family.score is not None else None,
        cdf=cdf if family.cdf is not None else None,
        ppf=ppf if family.cdf is not None and family.ppf is not None else None,
        sampler=None,
        lift=None,
        registration_box=None,
        label=f"{family.label} restricted to {interval}",
    )
