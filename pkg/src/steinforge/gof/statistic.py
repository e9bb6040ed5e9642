"""Sample-based Stein discrepancy and its Monte Carlo calibration."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ..errors import CapabilityError, DegenerateBatteryError, ParameterError
from ..families import OperatorFlavor, ParametricFamily
from ..operators import SteinOperator
from ..test_functions import TestFunction
from ..utils import assert_probability, get_int
from .samples import SampleSet

logger = logging.getLogger(__name__)

DEFAULT_N_SIM = 200
MAX_WORKERS = 8


def default_n_sim() -> int:
    """Return the number of calibration replications, honoring STEINFORGE_N_SIM.

    Environment Variables:
        STEINFORGE_N_SIM: The number of replications. Defaults to 200.

    Returns:
        int: The number of replications.
    """
    value = get_int(os.getenv("STEINFORGE_N_SIM"), DEFAULT_N_SIM)
    return value if value > 0 else DEFAULT_N_SIM


def default_workers() -> int:
    """Return the number of threads running calibration replications.

    Environment Variables:
        STEINFORGE_WORKERS: The number of threads. Defaults to the CPU count, at most 8.

    Returns:
        int: The number of threads.
    """
    fallback = min(MAX_WORKERS, os.cpu_count() or 1)
    value = get_int(os.getenv("STEINFORGE_WORKERS"), fallback)
    return value if value > 0 else fallback


@dataclass
class StatisticTerm:
    """The standardized empirical mean of T f for one battery member."""

    label: str
    mean: float
    deviation: float
    value: float | None
    """|mean| / deviation, None when the deviation vanishes."""

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "label": self.label,
            "mean": self.mean,
            "deviation": self.deviation,
            "value": self.value,
        }


def _moments(values: np.ndarray, weights: np.ndarray | None) -> tuple[float, float]:
    if weights is None:
        mean = float(np.mean(values))
        deviation = float(np.std(values, ddof=1)) if len(values) > 1 else 1.0
        return mean, deviation
    mean = float(np.average(values, weights=weights))
    deviation = float(np.sqrt(np.average((values - mean) ** 2, weights=weights)))
    return mean, deviation


def statistic_terms(
    samples: SampleSet, op: SteinOperator, battery: Sequence[TestFunction]
) -> list[StatisticTerm]:
    """Return the standardized mean of T f over the samples for every battery member.

    The boundary functional of the operator's target is added to the empirical mean, so that
    every term has mean zero under the target. A single observation is not standardized.

    Args:
        samples (SampleSet): One-dimensional samples.
        op (SteinOperator): The operator.
        battery (Sequence[TestFunction]): The test functions.

    Returns:
        list[StatisticTerm]: One term per member, in battery order.

    Raises:
        ParameterError: If the battery is empty or the samples have several coordinates.
    """
    if not battery:
        raise ParameterError("The battery must not be empty")
    if samples.dimension != 1:
        raise ParameterError(f"Expected one coordinate per sample, got {samples.dimension}")

    terms = []
    for f in battery:
        values = np.asarray(op.values(f, samples.values), dtype=float)
        mean, deviation = _moments(values, samples.weights)
        mean += op.boundary(f)
        value = abs(mean) / deviation if deviation > 0 else None
        terms.append(StatisticTerm(f.label, mean, deviation, value))
    return terms


def max_term(terms: Sequence[StatisticTerm]) -> float:
    """Return the largest standardized term.

    Raises:
        DegenerateBatteryError: If no member has a positive deviation.
    """
    values = [term.value for term in terms if term.value is not None]
    if not values:
        raise DegenerateBatteryError(
            "T f has no spread over the samples for every member of the battery"
        )
    return max(values)


def stein_statistic(
    samples: SampleSet, op: SteinOperator, battery: Sequence[TestFunction]
) -> float:
    """Return the largest standardized empirical mean |mean(T f)| / sd(T f) over a battery.

    Args:
        samples (SampleSet): One-dimensional samples.
        op (SteinOperator): The operator.
        battery (Sequence[TestFunction]): The test functions.

    Returns:
        float: The statistic, non-negative.

    Raises:
        DegenerateBatteryError: If T f is constant over the samples for every member.

    Examples:
        >>> op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")
        >>> round(stein_statistic(SampleSet(np.array([-1.0, 1.0])), op, [constant()]), 12)
        0.0
    """
    return max_term(statistic_terms(samples, op, battery))


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Return the counter-based generator of one replication.

    Args:
        seed (int): The run seed.
        replication (int): The replication index.

    Returns:
        np.random.Generator: A Philox generator keyed by (seed, replication).
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, replication])))


def simulate_statistics(
    family: ParametricFamily,
    theta0: Any,
    flavor: OperatorFlavor | str | None,
    battery: Sequence[TestFunction],
    n: int,
    n_sim: int | None = None,
    seed: int = 0,
    workers: int | None = None,
) -> np.ndarray:
    """Return the statistics of n_sim samples of size n drawn from g(.;theta0).

    Replication i draws from its own generator keyed by (seed, i), so the result does not
    depend on the order in which replications run. Replications run on a thread pool.

    Args:
        family (ParametricFamily): The target family.
        theta0 (Any): The parameter.
        flavor (OperatorFlavor | str | None): The flavor. Defaults to the family's default.
        battery (Sequence[TestFunction]): The test functions.
        n (int): The sample size.
        n_sim (int | None, optional): The number of replications. Defaults to STEINFORGE_N_SIM.
        seed (int, optional): The run seed. Defaults to 0.
        workers (int | None, optional): The number of threads. Defaults to STEINFORGE_WORKERS.

    Returns:
        np.ndarray: The statistics, in replication order.

    Raises:
        CapabilityError: If the family cannot be sampled.
        ParameterError: If n, n_sim or workers is not positive.
    """
    n_sim = default_n_sim() if n_sim is None else n_sim
    workers = default_workers() if workers is None else workers
    for value, name in ((n, "n"), (n_sim, "n_sim"), (workers, "workers")):
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ParameterError(f"{name} must be a positive integer, got {value}")
    if not family.has_sampler:
        raise CapabilityError(f"Family {family.name} has no sampler")

    op = SteinOperator.create(family, theta0, flavor)

    def replicate(replication: int) -> float:
        draws = family.sample(replication_rng(seed, replication), n, op.theta0)
        samples = SampleSet(draws, f"simulation {replication}", discrete=family.discrete)
        return stein_statistic(samples, op, battery)

    with ThreadPoolExecutor(max_workers=min(workers, n_sim)) as executor:
        statistics = np.fromiter(executor.map(replicate, range(n_sim)), float, count=n_sim)
    logger.debug(
        "Simulated %d statistics of size %d for %s on %d threads",
        n_sim,
        n,
        family.label,
        min(workers, n_sim),
    )
    return statistics


def calibrate_threshold(
    family: ParametricFamily,
    theta0: Any,
    flavor: OperatorFlavor | str | None,
    battery: Sequence[TestFunction],
    n: int,
    n_sim: int | None = None,
    alpha: float = 0.05,
    seed: int = 0,
    workers: int | None = None,
) -> float:
    """Return the (1 - alpha) empirical quantile of the statistic under the target.

    The quantile is the smallest simulated statistic with at least a 1 - alpha share of the
    simulations at or below it.

    Args:
        family (ParametricFamily): The target family.
        theta0 (Any): The parameter.
        flavor (OperatorFlavor | str | None): The flavor.
        battery (Sequence[TestFunction]): The test functions.
        n (int): The sample size.
        n_sim (int | None, optional): The number of replications. Defaults to STEINFORGE_N_SIM.
        alpha (float, optional): The level. Defaults to 0.05.
        seed (int, optional): The run seed. Defaults to 0.
        workers (int | None, optional): The number of threads. Defaults to STEINFORGE_WORKERS.

    Returns:
        float: The threshold.

    Raises:
        CapabilityError: If the family cannot be sampled.
        ParameterError: If alpha is not in (0, 1), or n, n_sim or workers is not positive.
    """
    try:
        assert_probability(alpha, "alpha")
    except ValueError as e:
        raise ParameterError(str(e)) from e
    statistics = simulate_statistics(family, theta0, flavor, battery, n, n_sim, seed, workers)
    return float(np.quantile(statistics, 1.0 - alpha, method="higher"))
