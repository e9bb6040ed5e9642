"""The parameter-integral solution f_A(x;theta) of the characterization theorem.

For a scalar parameter,

    f_A(x;theta) = (1/g(x;theta)) * integral from theta0 to theta of l_A(x;u,theta) g(x;u) du

with l_A(x;u,theta) = (I_A(x) - P(Z_u in A | Z_u in S_theta)) I_{S_theta}(x). Differentiating
f_A g in theta at theta0 returns l_A(x;theta0,theta0) g(x;theta0), so the generic operator maps
this two-argument form onto the centered indicator of A.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from ..errors import ConditioningError, ParameterError
from ..families import ParametricFamily, Theta, probability
from ..numerics import legendre_rule
from ..test_functions import TestFunction
from .events import EventSet

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32
RULE_CACHE_SIZE = 64


@dataclass(frozen=True, eq=False)
class TheoremSolution:
    """The two-argument form (x, theta) -> f_A(x;theta), computed with a Gauss-Legendre rule.

    The conditional masses of A at the nodes of the rule are kept in a bounded LRU cache per
    theta.

    Examples:
        >>> solution = TheoremSolution(builtin("gaussian_loc"), (0.0,), EventSet.half_line(0.0))
        >>> solution(0.0, (0.0,))
        0.0
        >>> round(solution(0.0, (0.1,)), 6)
        0.052165
    """

    family: ParametricFamily
    """A family with a scalar parameter."""

    theta0: Theta
    """The anchor of the parameter path."""

    event: EventSet
    """The event A."""

    order: int = DEFAULT_ORDER
    """The number of nodes of the rule."""

    _cached_rule: Callable = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.theta0) != 1:
            raise ParameterError(
                f"The parameter-integral solution needs a scalar parameter, got {self.theta0}"
            )
        cached = lru_cache(maxsize=RULE_CACHE_SIZE)(self._build_rule)
        object.__setattr__(self, "_cached_rule", cached)

    def rule(self, theta: Theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return the nodes, the weights and the conditional masses of A on the path to theta.

        Args:
            theta (Theta): The end of the path.

        Returns:
            tuple[np.ndarray, np.ndarray, np.ndarray]: The nodes u, the weights, and
                P(Z_u in A | Z_u in S_theta) at each node.

        Raises:
            ConditioningError: If S_theta is a null set for some node of the path.
        """
        return self._cached_rule(tuple(theta))

    def rule_cache_info(self) -> Any:
        """Return the hit and miss counts of the rule cache."""
        return self._cached_rule.cache_info()

    def _build_rule(self, theta: Theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        nodes, weights = legendre_rule(self.theta0[0], theta[0], self.order)
        support = self.family.support_fn(theta)
        masses = np.empty_like(nodes)
        for index, node in enumerate(nodes):
            u = (float(node),)
            within = probability(self.family, u, support)
            if within <= 0:
                raise ConditioningError(
                    f"S_theta of {self.family.name} at theta={theta[0]:g} is a null set "
                    f"under u={u[0]:g}, choose theta closer to theta0"
                )
            masses[index] = self.event.mass(self.family, u, support) / within

        logger.debug(
            "Cached %d nodes for %s on [%g, %g]", self.order, self.event, self.theta0[0], theta[0]
        )
        return nodes, weights, masses

    def __call__(self, x: Any, theta: Any) -> float | np.ndarray:
        """Evaluate f_A(x;theta).

        Args:
            x (Any): A point or an array of points.
            theta (Any): The parameter.

        Returns:
            float | np.ndarray: The values, 0 outside S_theta and identically 0 at theta0.
        """
        theta = self.family.check_theta(theta)
        values = np.asarray(x, dtype=float)
        result = np.zeros(values.shape)
        if theta != self.theta0:
            nodes, weights, masses = self.rule(theta)
            indicator = np.asarray(self.event.contains(values), dtype=float)
            base = np.asarray(self.family.log_density(values, theta), dtype=float)
            inside = np.isfinite(base)
            safe = np.where(inside, values, 0.0)
            with np.errstate(all="ignore"):
                for node, weight, mass in zip(nodes, weights, masses):
                    log_node = np.asarray(
                        self.family.log_density(safe, (float(node),)), dtype=float
                    )
                    result += weight * (indicator - mass) * np.exp(log_node - base)
            result = np.where(inside, result, 0.0)
        return float(result) if np.ndim(x) == 0 else result


def build_theorem_solution(
    family: ParametricFamily,
    theta0: Any,
    theta: Any,
    event: EventSet | str,
    order: int = DEFAULT_ORDER,
) -> TestFunction:
    """Build the parameter-integral solution at theta as a test function.

    The returned function evaluates x -> f_A(x;theta) and carries the full two-argument form,
    which the generic operator differentiates.

    Args:
        family (ParametricFamily): A family with a scalar parameter.
        theta0 (Any): The parameter of the target law.
        theta (Any): The end of the parameter path, in a neighborhood of theta0.
        event (EventSet | str): The event A.
        order (int, optional): The number of nodes of the rule. Defaults to 32.

    Returns:
        TestFunction: The solution.

    Raises:
        ParameterError: If the parameter is not scalar or theta is outside the parameter space.
        ConditioningError: If S_theta is a null set for some node of the path.

    Examples:
        >>> f = build_theorem_solution(builtin("gaussian_loc"), 0.0, 0.0, "le:0")
        >>> f.eval(1.5)
        0.0
    """
    theta0 = family.check_theta(theta0)
    theta = family.check_theta(theta)
    solution = TheoremSolution(family, theta0, EventSet.parse(event), order)
    if theta != theta0:
        solution.rule(theta)
    return TestFunction(
        lambda x: solution(x, theta),
        two_arg_form=solution,
        label=f"f_A[{solution.event}](theta={theta[0]:g})",
    )
