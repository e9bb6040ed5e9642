"""Pairs of parametric families sharing a support, and their generalized score."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable

import numpy as np

from ..errors import ParameterError, SupportError
from ..families import (
    ParameterRole,
    ParametricFamily,
    Theta,
    get_family,
    param_score,
    restrict,
)
from ..numerics import Interval

logger = logging.getLogger(__name__)


def _resolve(family: ParametricFamily | str) -> ParametricFamily:
    return get_family(family) if isinstance(family, str) else family


@dataclass(frozen=True)
class ScorePair:
    """Two parametric families p and q with a common support at theta0.

    Examples:
        >>> pair = ScorePair.create("gaussian_loc", "gaussian_loc", 0.0)
        >>> pair.theta0
        (0.0,)
    """

    p: ParametricFamily
    q: ParametricFamily
    theta0: Theta

    @classmethod
    def create(
        cls, p: ParametricFamily | str, q: ParametricFamily | str, theta0: Any = None
    ) -> ScorePair:
        """Validate and build a pair.

        Args:
            p (ParametricFamily | str): The first family, or its catalog name.
            q (ParametricFamily | str): The second family, or its catalog name.
            theta0 (Any, optional): The parameter, interior for both families. Defaults to the
                default theta0 of p.

        Returns:
            ScorePair: The pair.

        Raises:
            ParameterError: If the families mix measures or parameter dimensions.
            SupportError: If the supports differ at theta0.
        """
        p, q = _resolve(p), _resolve(q)
        if p.kind != q.kind:
            raise ParameterError(f"{p.name} and {q.name} are not densities of the same measure")
        if p.param_space.dim != q.param_space.dim:
            raise ParameterError(
                f"{p.name} and {q.name} have {p.param_space.dim} and {q.param_space.dim} "
                "parameters"
            )
        theta0 = q.check_theta(p.check_theta(theta0))
        support_p, support_q = p.support_fn(theta0), q.support_fn(theta0)
        if support_p != support_q:
            raise SupportError(
                f"{p.name} and {q.name} have different supports {support_p} and {support_q}"
            )
        return cls(p, q, theta0)

    @property
    def support(self):
        """Return the common support at theta0."""
        return self.p.support_fn(self.theta0)

    @property
    def label(self) -> str:
        """Return a human-readable label."""
        return f"r({self.p.label}, {self.q.label})"

    def swap(self) -> ScorePair:
        """Return the pair (q, p)."""
        return ScorePair(self.q, self.p, self.theta0)

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"p": self.p.label, "q": self.q.label, "theta0": list(self.theta0)}


def location_pair(
    p: ParametricFamily | str, q: ParametricFamily | str, mu0: float = 0.0
) -> ScorePair:
    """Build the pair of two location families, whose generalized score is the difference of
    their location scores.

    Args:
        p (ParametricFamily | str): The first location family.
        q (ParametricFamily | str): The second location family.
        mu0 (float, optional): The location. Defaults to 0.

    Returns:
        ScorePair: The pair.

    Raises:
        ParameterError: If a family is not a location family.

    Examples:
        >>> pair = location_pair("gaussian_loc", "gaussian_loc")
        >>> generalized_score(pair, 1.5)
        array([0.])
    """
    p, q = _resolve(p), _resolve(q)
    for family in (p, q):
        if family.role != ParameterRole.LOCATION:
            raise ParameterError(f"{family.name} is not a location family")
    return ScorePair.create(p, q, mu0)


def common_support_pair(
    p: ParametricFamily | str, q: ParametricFamily | str, theta0: Any = None
) -> ScorePair:
    """Build a pair after restricting both families to the intersection of their supports.

    A family whose support already equals the intersection is kept as it is.

    Args:
        p (ParametricFamily | str): The first continuous family.
        q (ParametricFamily | str): The second continuous family.
        theta0 (Any, optional): The parameter. Defaults to the default theta0 of p.

    Returns:
        ScorePair: The pair.

    Raises:
        SupportError: If the supports do not overlap.
        ParameterError: If a family is discrete.

    Examples:
        >>> pair = common_support_pair("gaussian_scale", "exponential_scale", 1.0)
        >>> pair.support
        Interval(lo=0.0, hi=inf)
    """
    p, q = _resolve(p), _resolve(q)
    if p.discrete or q.discrete:
        raise ParameterError("Only continuous families are restricted to a common support")
    theta = p.check_theta(theta0)
    support_p, support_q = p.support_fn(theta), q.support_fn(theta)
    common = Interval(support_p.lo, support_p.hi).intersect(Interval(support_q.lo, support_q.hi))
    if common is None or common.lo == common.hi:
        raise SupportError(f"{p.name} and {q.name} have no common support at theta={theta}")

    def restricted(family: ParametricFamily, support: Interval) -> ParametricFamily:
        if support == common:
            return family
        logger.info("Restricting %s to %s", family.name, common)
        return restrict(family, common)

    return ScorePair.create(restricted(p, support_p), restricted(q, support_q), theta)


def generalized_score(pair: ScorePair, x: float) -> np.ndarray:
    """Return the generalized standardized score r(p, q)(x) at theta0.

    Args:
        pair (ScorePair): The pair.
        x (float): A point of the common support.

    Returns:
        np.ndarray: d/dtheta log p - d/dtheta log q, one entry per parameter coordinate.

    Raises:
        SupportError: If x lies outside the common support.

    Examples:
        >>> pair = location_pair("gaussian_loc", "gaussian_loc")
        >>> generalized_score(pair, 5.0)
        array([0.])
    """
    return param_score(pair.p, x, pair.theta0) - param_score(pair.q, x, pair.theta0)


def score_rows(pair: ScorePair, grid: Iterable[float]) -> list[dict[str, Any]]:
    """Tabulate the generalized score on a grid.

    Args:
        pair (ScorePair): The pair.
        grid (Iterable[float]): The points.

    Returns:
        list[dict[str, Any]]: One row per point, with the columns x and r0, r1, ...
    """
    rows = []
    for x in grid:
        score = generalized_score(pair, float(x))
        row = {"x": float(x)}
        row.update({f"r{j}": float(value) for j, value in enumerate(score)})
        rows.append(row)
    return rows
