"""Evaluation budget shared by the numerical semidecision procedures."""

from __future__ import annotations

import math
import time


class BudgetExpired(Exception):
    """The budget of a semidecision procedure ran out."""


class Budget:
    """A wall-clock and evaluation-count budget.

    Assumption and condition checks spend this budget; once it is expired they stop probing and
    report an inconclusive verdict.

    Args:
        seconds (float): The time allowance in seconds. Use math.inf for no time limit.
        max_evaluations (float, optional): The maximum number of evaluations.
            Defaults to math.inf.
        start (bool, optional): Whether to start the clock immediately. Defaults to True.

    Examples:
        >>> budget = Budget(5, max_evaluations=100)
        >>> budget.spend(40)
        >>> budget.evaluations
        40
        >>> budget.expired
        False
        >>> budget.spend(60)
        >>> budget.expired
        True
    """

    _seconds: float
    _max_evaluations: float
    _evaluations: int
    _timestamp: float
    _started: bool

    def __init__(
        self,
        seconds: float,
        max_evaluations: float = math.inf,
        start: bool = True,
    ) -> None:
        self._seconds = seconds
        self._max_evaluations = max_evaluations
        self._evaluations = 0
        self._started = start
        self._timestamp = time.time()

    @property
    def seconds(self) -> float:
        """Return the time allowance in seconds.

        Returns:
            float: The time allowance in seconds.
        """
        return self._seconds

    @seconds.setter
    def seconds(self, value: float) -> None:
        """Set the time allowance in seconds.

        Args:
            value (float): The new time allowance in seconds.
        """
        self._seconds = value

    @property
    def max_evaluations(self) -> float:
        """Return the maximum number of evaluations.

        Returns:
            float: The maximum number of evaluations.
        """
        return self._max_evaluations

    @property
    def evaluations(self) -> int:
        """Return the number of evaluations spent so far.

        Returns:
            int: The number of evaluations.
        """
        return self._evaluations

    @property
    def started(self) -> bool:
        """Return whether the clock has been started.

        Returns:
            bool: True if the clock has been started, False otherwise.
        """
        return self._started

    @property
    def elapsed(self) -> float:
        """Return the elapsed time since the clock was started.

        Returns:
            float: The elapsed time in seconds.

        Examples:
            >>> budget = Budget(5)
            >>> time.sleep(2)
            >>> budget.elapsed
            2.0
        """
        if not self._started:
            return 0.0
        return time.time() - self._timestamp

    @property
    def remaining(self) -> float:
        """Return the remaining time before the budget expires.

        Returns:
            float: The remaining time in seconds.
        """
        if not self._started:
            return self._seconds
        return max(0.0, self._seconds - self.elapsed)

    @property
    def expired(self) -> bool:
        """Return True if either the time or the evaluation allowance is exhausted.

        Returns:
            bool: True if the budget has expired, False otherwise.
        """
        return self.elapsed >= self._seconds or self._evaluations >= self._max_evaluations

    def spend(self, count: int = 1) -> None:
        """Record evaluations against the budget.

        Args:
            count (int, optional): The number of evaluations to record. Defaults to 1.
        """
        self._evaluations += count

    def charge(self, count: int = 1) -> None:
        """Record evaluations and stop the caller once the budget is exhausted.

        Args:
            count (int, optional): The number of evaluations to record. Defaults to 1.

        Raises:
            BudgetExpired: If the budget has expired.

        Examples:
            >>> budget = Budget(math.inf, max_evaluations=2)
            >>> budget.charge()
            >>> budget.charge()
            Traceback (most recent call last):
                ...
            steinforge.utils.budget.BudgetExpired: budget exhausted after 2 evaluations
        """
        self.spend(count)
        if self.expired:
            raise BudgetExpired(f"budget exhausted after {self._evaluations} evaluations")

    def start(self) -> None:
        """Start the clock."""
        self._started = True
        self.reset()

    def reset(self) -> None:
        """Restart the clock and clear the evaluation count.

        Examples:
            >>> budget = Budget(5)
            >>> budget.spend(3)
            >>> budget.reset()
            >>> budget.evaluations
            0
        """
        self._timestamp = time.time()
        self._evaluations = 0

    def stop(self) -> None:
        """Stop the clock."""
        self._started = False
