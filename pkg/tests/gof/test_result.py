"""Unit tests for goodness-of-fit decisions."""

import numpy as np
import pytest

from steinforge.families import builtin
from steinforge.gof import (
    Decision,
    GofResult,
    SampleSet,
    StatisticTerm,
    calibrate_threshold,
    gof_test,
    stein_statistic,
)
from steinforge.operators import SteinOperator
from steinforge.test_functions import (
    adapt_battery,
    battery_from_spec,
    constant,
    polynomial_battery,
)

GAUSSIAN = builtin("gaussian_loc")


class TestGofResult:
    """Test suite for GofResult."""

    @pytest.mark.parametrize(
        ("statistic", "threshold", "expected"),
        [(0.1, 0.2, Decision.ACCEPT), (0.2, 0.2, Decision.ACCEPT), (0.3, 0.2, Decision.REJECT)],
    )
    def test_decision(self, statistic, threshold, expected):
        """Test that only statistics above the threshold reject."""

        assert GofResult(statistic, threshold, 0.05).decision == expected

    def test_to_dict(self):
        """Test the JSON representation."""

        term = StatisticTerm("1", 0.1, 1.0, 0.1)

        data = GofResult(0.1, 0.2, 0.05, [term], "gaussian_loc(mu=0)", {"n": 3}, 10, 42).to_dict()

        assert data["decision"] == "accept"
        assert data["per_function"] == [term.to_dict()]
        assert data["n_sim"] == 10
        assert data["seed"] == 42


class TestGofTest:
    """Test suite for gof_test."""

    def test_target_samples(self):
        """Test that 10000 draws of the target are accepted at the 5% level."""

        samples = SampleSet(np.random.default_rng(42).standard_normal(10000), "normal")

        result = gof_test(samples, GAUSSIAN, 0.0, alpha=0.05, seed=42, n_sim=200)

        assert result.decision == Decision.ACCEPT
        assert result.statistic == pytest.approx(0.015389, abs=1e-6)
        assert result.threshold == pytest.approx(0.026814, abs=1e-6)
        assert len(result.per_function) == 4
        assert result.samples["n"] == 10000
        assert result.target == GAUSSIAN.at(0.0).label

    def test_wrong_family(self):
        """Test that exponential samples are rejected by the Gaussian target."""

        samples = SampleSet(np.random.default_rng(42).exponential(size=10000), "exponential")

        result = gof_test(samples, GAUSSIAN, 0.0, alpha=0.05, seed=42, n_sim=200)

        assert result.decision == Decision.REJECT
        assert result.statistic > result.threshold

    def test_single_observation(self):
        """Test that one observation still gives a result."""

        result = gof_test(SampleSet([0.3]), GAUSSIAN, 0.0, battery=[constant()], n_sim=20)

        assert result.statistic == pytest.approx(0.3)
        assert result.threshold > 0
        assert result.decision in (Decision.ACCEPT, Decision.REJECT)

    def test_discrete(self):
        """Test Poisson counts against the Poisson target."""

        family = builtin("poisson_lambda")
        counts = np.random.default_rng(5).poisson(2.0, size=2000)

        result = gof_test(
            SampleSet(counts, discrete=True), family, 2.0, battery=polynomial_battery(2), n_sim=50
        )

        assert result.statistic >= 0
        assert result.threshold > 0

    @pytest.mark.slow
    def test_acceptance_rate(self):
        """Test that 90% to 100% of target samples are accepted over 50 seeds."""

        battery = adapt_battery(battery_from_spec(None), GAUSSIAN)
        op = SteinOperator.create(GAUSSIAN, 0.0, "location")
        threshold = calibrate_threshold(GAUSSIAN, 0.0, "location", battery, 10000, 200, 0.05, 42)

        accepted = [
            stein_statistic(
                SampleSet(np.random.default_rng(1000 + seed).standard_normal(10000)), op, battery
            )
            <= threshold
            for seed in range(50)
        ]

        assert 0.90 <= sum(accepted) / len(accepted) <= 1.00
