"""Unit tests for the Budget class."""

# pylint: disable=unused-argument,redefined-outer-name

import math

import pytest

from steinforge.utils import Budget, BudgetExpired


class TestBudget:
    """Unit tests for the Budget class."""

    def test_init_with_start_true(self, fake_time):
        """Test initialization with start=True (default)."""

        budget = Budget(5)

        assert budget.seconds == 5
        assert budget.max_evaluations == math.inf
        assert budget.evaluations == 0
        assert budget.started is True
        assert budget.elapsed == 0.0
        assert budget.remaining == 5.0
        assert budget.expired is False

    def test_init_with_start_false(self, fake_time):
        """Test that a stopped clock does not run."""

        budget = Budget(5, start=False)
        fake_time.advance(10)

        assert budget.started is False
        assert budget.elapsed == 0.0
        assert budget.remaining == 5.0
        assert budget.expired is False

    def test_seconds_property_setter(self, fake_time):
        """Test setting the seconds property."""

        budget = Budget(5)
        budget.seconds = 10

        assert budget.seconds == 10

    def test_elapsed_and_remaining(self, fake_time):
        """Test the clock while started."""

        budget = Budget(5)
        fake_time.advance(2)

        assert budget.elapsed == 2.0
        assert budget.remaining == 3.0
        assert budget.expired is False

    def test_expired_by_time(self, fake_time):
        """Test that the budget expires with the clock."""

        budget = Budget(5)
        fake_time.advance(5)

        assert budget.remaining == 0.0
        assert budget.expired is True

    def test_expired_by_evaluations(self, fake_time):
        """Test that the budget expires with the evaluation count."""

        budget = Budget(math.inf, max_evaluations=10)
        budget.spend(9)

        assert budget.expired is False

        budget.spend()

        assert budget.evaluations == 10
        assert budget.expired is True

    def test_charge(self, fake_time):
        """Test that charging an exhausted budget raises."""

        budget = Budget(math.inf, max_evaluations=2)
        budget.charge()

        with pytest.raises(BudgetExpired, match="after 2 evaluations"):
            budget.charge()

    def test_charge_after_timeout(self, fake_time):
        """Test that charging after the time allowance raises."""

        budget = Budget(1)
        fake_time.advance(1.5)

        with pytest.raises(BudgetExpired):
            budget.charge()

    def test_reset(self, fake_time):
        """Test that reset restarts the clock and clears the count."""

        budget = Budget(5, max_evaluations=3)
        budget.spend(3)
        fake_time.advance(4)

        budget.reset()

        assert budget.evaluations == 0
        assert budget.elapsed == 0.0
        assert budget.expired is False

    def test_start_and_stop(self, fake_time):
        """Test starting a stopped budget and stopping it again."""

        budget = Budget(5, start=False)
        fake_time.advance(3)

        budget.start()
        fake_time.advance(1)

        assert budget.started is True
        assert budget.elapsed == 1.0

        budget.stop()

        assert budget.started is False
        assert budget.remaining == 5.0
