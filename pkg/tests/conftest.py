"""Shared pytest fixtures for tests."""

import math
from typing import Generator
from unittest.mock import patch

import numpy as np
import pytest
from scipy import stats

from steinforge.families import (
    FamilyKind,
    ParametricFamily,
    ParamSpace,
    location_family,
    register_family,
    unregister_family,
)
from steinforge.numerics import Interval, IntRange
from steinforge.utils import budget as budget_module


class FakeTime:
    """Simple controllable clock for tests."""

    def __init__(self, start: float = 0.0) -> None:
        self._now = start

    def time(self) -> float:
        """Return the current fake time."""
        return self._now

    def advance(self, seconds: float) -> None:
        """Advance the fake time forward."""
        self._now += seconds


@pytest.fixture
def fake_time() -> Generator[FakeTime, None, None]:
    """Provide a fake time source for budget-based tests."""
    clock = FakeTime()
    with patch.object(budget_module.time, "time", clock.time):
        yield clock


@pytest.fixture
def laplace_family() -> ParametricFamily:
    """Provide a Laplace location family without analytic scores."""
    return location_family("laplace_loc", lambda t: 0.5 * np.exp(-np.abs(t)))


@pytest.fixture
def arcsine_family() -> ParametricFamily:
    """Provide an arcsine location family, unbounded at its moving endpoints."""
    return location_family(
        "arcsine_loc",
        lambda t: 1.0 / (math.pi * np.sqrt(1.0 - t * t)),
        support=Interval(-1.0, 1.0),
    )


@pytest.fixture
def bump_family() -> ParametricFamily:
    """Provide a location family whose density 1.5 t^2 vanishes inside its support."""
    return location_family("bump_loc", lambda t: 1.5 * t * t, support=Interval(-1.0, 1.0))


@pytest.fixture
def binomial_without_cdf() -> ParametricFamily:
    """Provide Bin(4, p) without a distribution function or analytic scores."""
    return ParametricFamily(
        name="binomial_plain",
        kind=FamilyKind.DISCRETE,
        param_space=ParamSpace((Interval(0.0, 1.0),)),
        pdf=lambda x, theta: stats.binom.pmf(x, 4, theta[0]),
        support_fn=lambda theta: IntRange(0, 4),
        default_theta=(0.3,),
        param_names=("p",),
        default_flavor="discrete",
        sampler=lambda rng, size, theta: rng.binomial(4, theta[0], size=size),
    )


@pytest.fixture
def registered_laplace(laplace_family) -> Generator[ParametricFamily, None, None]:
    """Register the Laplace location family for the duration of a test."""
    register_family(laplace_family)
    yield laplace_family
    unregister_family(laplace_family.name)


@pytest.fixture
def two_parameter_gaussian() -> ParametricFamily:
    """Provide the Gaussian family N(mu, sigma^2) with theta = (mu, sigma)."""
    return ParametricFamily(
        name="gaussian_mu_sigma",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((Interval(-math.inf, math.inf), Interval(0.0, math.inf))),
        pdf=lambda x, theta: stats.norm.pdf(x, theta[0], theta[1]),
        support_fn=lambda theta: Interval(-math.inf, math.inf),
        default_theta=(0.0, 1.0),
        param_names=("mu", "sigma"),
        logpdf=lambda x, theta: stats.norm.logpdf(x, theta[0], theta[1]),
        cdf=lambda x, theta: stats.norm.cdf(x, theta[0], theta[1]),
        ppf=lambda q, theta: stats.norm.ppf(q, theta[0], theta[1]),
    )
