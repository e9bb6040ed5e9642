"""Unit tests for the Stein statistic and its calibration."""

import math
import os
from unittest.mock import patch

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinforge.errors import CapabilityError, DegenerateBatteryError, ParameterError
from steinforge.families import builtin
from steinforge.gof import (
    SampleSet,
    calibrate_threshold,
    default_n_sim,
    default_workers,
    replication_rng,
    simulate_statistics,
    stein_statistic,
    statistic_terms,
)
from steinforge.operators import SteinOperator
from steinforge.test_functions import constant, identity, polynomial_battery

GAUSSIAN = builtin("gaussian_loc")
GAUSSIAN_OP = SteinOperator.create(GAUSSIAN, 0.0, "location")


def _normal_samples(seed: int, n: int) -> SampleSet:
    return SampleSet(np.random.default_rng(seed).standard_normal(n), "normal")


class TestStatisticTerms:
    """Test suite for statistic_terms."""

    def test_terms(self):
        """Test the mean and deviation of T 1 = x."""

        samples = SampleSet([1.0, 2.0, 3.0])

        terms = statistic_terms(samples, GAUSSIAN_OP, [constant()])

        assert terms[0].label == "1"
        assert terms[0].mean == pytest.approx(2.0)
        assert terms[0].deviation == pytest.approx(1.0)
        assert terms[0].value == pytest.approx(2.0)
        assert terms[0].to_dict()["value"] == pytest.approx(2.0)

    def test_boundary(self):
        """Test that the boundary functional centers the terms under the target."""

        op = SteinOperator.create(builtin("exponential_loc"), 0.0, "location")
        samples = SampleSet([0.5, 1.0, 1.5])

        terms = statistic_terms(samples, op, [constant()])

        assert terms[0].mean == pytest.approx(0.0, abs=1e-12)

    def test_single_observation(self):
        """Test that one observation is not standardized."""

        terms = statistic_terms(SampleSet([0.5]), GAUSSIAN_OP, [constant()])

        assert terms[0].value == pytest.approx(0.5)

    @pytest.mark.parametrize(
        ("samples", "battery"),
        [(SampleSet([1.0]), []), (SampleSet([[1.0, 2.0]]), [constant()])],
    )
    def test_invalid(self, samples, battery):
        """Test empty batteries and multivariate samples."""

        with pytest.raises(ParameterError):
            statistic_terms(samples, GAUSSIAN_OP, battery)


class TestSteinStatistic:
    """Test suite for stein_statistic."""

    def test_quadrature_nodes(self):
        """Test Gauss-Hermite nodes, which integrate T f exactly for quadratic f."""

        nodes, weights = np.polynomial.hermite_e.hermegauss(10)
        samples = SampleSet(nodes, "nodes", weights)

        statistic = stein_statistic(samples, GAUSSIAN_OP, polynomial_battery(2))

        assert statistic <= 1e-8

    def test_degenerate(self):
        """Test samples where T f does not vary for any member."""

        with pytest.raises(DegenerateBatteryError):
            stein_statistic(SampleSet([1.0, 1.0, 1.0]), GAUSSIAN_OP, [constant()])

    def test_skips_flat_members(self):
        """Test that members without spread are left out of the maximum."""

        samples = SampleSet([1.0, 1.0, 2.0])
        flat = constant(0.0)

        assert stein_statistic(samples, GAUSSIAN_OP, [flat, constant()]) == pytest.approx(
            stein_statistic(samples, GAUSSIAN_OP, [constant()])
        )

    def test_reordering_and_duplication(self):
        """Test that the statistic depends on the set of members only."""

        samples = _normal_samples(1, 200)
        battery = polynomial_battery(3, "gaussian")

        statistic = stein_statistic(samples, GAUSSIAN_OP, battery)

        assert stein_statistic(samples, GAUSSIAN_OP, battery[::-1]) == statistic
        assert stein_statistic(samples, GAUSSIAN_OP, battery + battery[:1]) == statistic

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_rescaling(self, factor):
        """Test that rescaling a member by a positive factor leaves the statistic unchanged."""

        samples = _normal_samples(2, 100)

        scaled = stein_statistic(samples, GAUSSIAN_OP, [identity().scaled(factor)])

        assert scaled == pytest.approx(stein_statistic(samples, GAUSSIAN_OP, [identity()]))

    def test_wrong_family(self):
        """Test that exponential data is far from the Gaussian identity."""

        samples = SampleSet(np.random.default_rng(3).exponential(size=1000))

        assert stein_statistic(samples, GAUSSIAN_OP, polynomial_battery(3, "gaussian")) > 0.5


class TestReplicationRng:
    """Test suite for replication_rng."""

    def test_streams(self):
        """Test that streams are reproducible and distinct per replication."""

        first = replication_rng(42, 0).standard_normal(3)

        np.testing.assert_array_equal(first, replication_rng(42, 0).standard_normal(3))
        assert not np.array_equal(first, replication_rng(42, 1).standard_normal(3))
        assert isinstance(replication_rng(42, 0).bit_generator, np.random.Philox)


class TestCalibrateThreshold:
    """Test suite for calibrate_threshold and simulate_statistics."""

    def test_single_simulation(self):
        """Test that the median of one simulation is that simulation."""

        battery = [identity()]
        statistics = simulate_statistics(GAUSSIAN, 0.0, "location", battery, 50, 1, 7)

        threshold = calibrate_threshold(GAUSSIAN, 0.0, "location", battery, 50, 1, 0.5, 7)

        assert threshold == statistics[0]

    def test_small_alpha(self):
        """Test that a small level gives the largest simulated statistic."""

        battery = [identity()]
        statistics = simulate_statistics(GAUSSIAN, 0.0, None, battery, 30, 20, 1)

        threshold = calibrate_threshold(GAUSSIAN, 0.0, None, battery, 30, 20, 1e-9, 1)

        assert threshold == statistics.max()

    def test_reproducible(self):
        """Test that equal seeds give equal statistics."""

        battery = polynomial_battery(1)
        first = simulate_statistics(builtin("poisson_lambda"), 1.0, None, battery, 40, 5, 3)

        second = simulate_statistics(builtin("poisson_lambda"), 1.0, None, battery, 40, 5, 3)

        np.testing.assert_array_equal(first, second)
        assert np.all(first >= 0)

    def test_thread_count_invariant(self):
        """Test that the statistics do not depend on the number of threads."""

        battery = polynomial_battery(2, "gaussian")
        sequential = simulate_statistics(GAUSSIAN, 0.0, None, battery, 60, 12, 5, workers=1)

        pooled = simulate_statistics(GAUSSIAN, 0.0, None, battery, 60, 12, 5, workers=4)

        np.testing.assert_array_equal(sequential, pooled)
        op = SteinOperator.create(GAUSSIAN, 0.0, None)
        for replication in (0, 7, 11):
            draws = GAUSSIAN.sample(replication_rng(5, replication), 60, (0.0,))
            expected = stein_statistic(SampleSet(draws), op, battery)
            assert pooled[replication] == expected

    def test_invalid_workers(self):
        """Test that the thread count must be positive."""

        with pytest.raises(ParameterError):
            simulate_statistics(GAUSSIAN, 0.0, None, [identity()], 10, 5, workers=0)

    def test_decreasing_in_n(self):
        """Test that the statistic under the target shrinks as samples grow."""

        battery = polynomial_battery(3, "gaussian")

        means = [
            simulate_statistics(GAUSSIAN, 0.0, None, battery, n, 20, 11).mean()
            for n in (100, 1000, 10000)
        ]

        assert means[0] > means[1] > means[2]

    def test_no_sampler(self, laplace_family):
        """Test families without a sampler."""

        with pytest.raises(CapabilityError):
            calibrate_threshold(laplace_family, 0.0, None, [identity()], 10, 5)

    @pytest.mark.parametrize(
        ("n", "n_sim", "alpha"), [(0, 5, 0.05), (10, 0, 0.05), (10, 5, 0.0), (10, 5, 1.0)]
    )
    def test_invalid(self, n, n_sim, alpha):
        """Test invalid sizes and levels."""

        with pytest.raises(ParameterError):
            calibrate_threshold(GAUSSIAN, 0.0, None, [identity()], n, n_sim, alpha)


class TestDefaultNSim:
    """Test suite for default_n_sim."""

    @pytest.mark.parametrize(("value", "expected"), [(None, 200), ("50", 50), ("-3", 200)])
    def test_environment(self, value, expected):
        """Test STEINFORGE_N_SIM."""

        environment = {} if value is None else {"STEINFORGE_N_SIM": value}
        with patch.dict(os.environ, environment, clear=True):
            assert default_n_sim() == expected

    def test_used_by_default(self):
        """Test that simulations honor the environment."""

        with patch.dict(os.environ, {"STEINFORGE_N_SIM": "3"}):
            statistics = simulate_statistics(GAUSSIAN, 0.0, None, [identity()], 10)

        assert len(statistics) == 3
        assert not any(math.isnan(value) for value in statistics)


class TestDefaultWorkers:
    """Test suite for default_workers."""

    @pytest.mark.parametrize(("value", "expected"), [("3", 3), ("1", 1)])
    def test_environment(self, value, expected):
        """Test STEINFORGE_WORKERS."""

        with patch.dict(os.environ, {"STEINFORGE_WORKERS": value}):
            assert default_workers() == expected

    @pytest.mark.parametrize("value", [None, "0", "many"])
    def test_fallback(self, value):
        """Test the CPU count fallback, capped at 8 threads."""

        environment = {} if value is None else {"STEINFORGE_WORKERS": value}
        with patch.dict(os.environ, environment, clear=True):
            with patch("steinforge.gof.statistic.os.cpu_count", return_value=32):
                assert default_workers() == 8
