"""Goodness-of-fit testing with sample-based Stein discrepancies."""

__all__ = [
    "calibrate_threshold",
    "Decision",
    "DEFAULT_N_SIM",
    "default_n_sim",
    "default_workers",
    "gof_test",
    "GofResult",
    "load_samples",
    "max_term",
    "replication_rng",
    "SampleSet",
    "simulate_statistics",
    "stein_statistic",
    "statistic_terms",
    "StatisticTerm",
]

from .result import Decision, GofResult, gof_test
from .samples import SampleSet, load_samples
from .statistic import (
    DEFAULT_N_SIM,
    StatisticTerm,
    calibrate_threshold,
    default_n_sim,
    default_workers,
    max_term,
    replication_rng,
    simulate_statistics,
    stein_statistic,
    statistic_terms,
)
