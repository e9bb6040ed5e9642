"""Domain types of the numerical engine."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class Interval:
    """A closed interval of the extended real line.

    Infinite endpoints are allowed and the membership test treats them as open.

    Examples:
        >>> Interval(0.0, math.inf).contains(3.0)
        True
        >>> Interval(-1.0, 1.0).intersect(Interval(0.0, 2.0))
        Interval(lo=0.0, hi=1.0)
    """

    lo: float
    """Lower endpoint, possibly -inf."""

    hi: float
    """Upper endpoint, possibly +inf."""

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError(f"Interval endpoints must not be NaN, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"Interval lower endpoint must not exceed upper, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def discrete(self) -> bool:
        """Return False, intervals carry the Lebesgue measure."""
        return False

    @property
    def is_finite(self) -> bool:
        """Return True when both endpoints are finite."""
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        """Return the length of the interval."""
        return self.hi - self.lo

    @property
    def has_interior(self) -> bool:
        """Return True when the interval has a non-empty interior."""
        return self.hi > self.lo

    def contains(self, x: float | np.ndarray) -> bool | np.ndarray:
        """Test membership, vectorized over numpy arrays.

        Args:
            x (float | np.ndarray): The point(s) to test.

        Returns:
            bool | np.ndarray: True where lo <= x <= hi.
        """
        inside = (np.asarray(x) >= self.lo) & (np.asarray(x) <= self.hi)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def contains_interior(self, x: float | np.ndarray) -> bool | np.ndarray:
        """Test membership in the open interior, vectorized over numpy arrays.

        Args:
            x (float | np.ndarray): The point(s) to test.

        Returns:
            bool | np.ndarray: True where lo < x < hi.
        """
        inside = (np.asarray(x) > self.lo) & (np.asarray(x) < self.hi)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def intersect(self, other: Interval) -> Interval | None:
        """Return the intersection with another interval, or None when it is empty.

        Args:
            other (Interval): The other interval.

        Returns:
            Interval | None: The intersection.
        """
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def hull(self, other: Interval) -> Interval:
        """Return the smallest interval containing both intervals.

        Args:
            other (Interval): The other interval.

        Returns:
            Interval: The convex hull.
        """
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"lo": self.lo, "hi": self.hi}

    def __str__(self) -> str:
        left = "(" if math.isinf(self.lo) else "["
        right = ")" if math.isinf(self.hi) else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class IntRange:
    """An integer range {lo, ..., hi}, where hi may be infinite.

    Examples:
        >>> IntRange(0, 3).contains(2)
        True
        >>> list(IntRange(0, 3).points())
        [0, 1, 2, 3]
    """

    lo: int
    """Lower endpoint, included."""

    hi: float
    """Upper endpoint, included, an integer or +inf."""

    def __post_init__(self) -> None:
        if isinstance(self.lo, bool) or int(self.lo) != self.lo:
            raise ValueError(f"IntRange lower endpoint must be an integer, got {self.lo}")
        hi = self.hi
        if not (math.isinf(hi) and hi > 0) and int(hi) != hi:
            raise ValueError(f"IntRange upper endpoint must be an integer or +inf, got {hi}")
        if self.lo > hi:
            raise ValueError(f"IntRange lower endpoint must not exceed upper, got {self}")
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "hi", hi if math.isinf(hi) else int(hi))

    @property
    def discrete(self) -> bool:
        """Return True, integer ranges carry the counting measure."""
        return True

    @property
    def is_finite(self) -> bool:
        """Return True when the upper endpoint is finite."""
        return not math.isinf(self.hi)

    @property
    def size(self) -> float:
        """Return the number of points, possibly infinite."""
        return self.hi - self.lo + 1

    def contains(self, x: float | np.ndarray) -> bool | np.ndarray:
        """Test membership, vectorized over numpy arrays.

        Non-integer points are never members.

        Args:
            x (float | np.ndarray): The point(s) to test.

        Returns:
            bool | np.ndarray: True where x is an integer in the range.
        """
        values = np.asarray(x, dtype=float)
        inside = (values >= self.lo) & (values <= self.hi) & (np.floor(values) == values)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def points(self, limit: int | None = None) -> Iterator[int]:
        """Iterate over the integers of the range.

        Args:
            limit (int | None, optional): The maximum number of points to produce, required for
                infinite ranges to terminate. Defaults to None.

        Returns:
            Iterator[int]: The points in increasing order.
        """
        x = self.lo
        count = 0
        while x <= self.hi and (limit is None or count < limit):
            yield x
            x += 1
            count += 1

    def intersect(self, other: IntRange) -> IntRange | None:
        """Return the intersection with another range, or None when it is empty.

        Args:
            other (IntRange): The other range.

        Returns:
            IntRange | None: The intersection.
        """
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return IntRange(lo, hi)

    def hull(self, other: IntRange) -> IntRange:
        """Return the smallest range containing both ranges."""
        return IntRange(min(self.lo, other.lo), max(self.hi, other.hi))

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"lo": self.lo, "hi": self.hi}

    def __str__(self) -> str:
        return f"{{{self.lo}, ..., {self.hi}}}" if self.is_finite else f"{{{self.lo}, ...}}"


Domain = Interval | IntRange


@dataclass(frozen=True)
class NumericReport:
    """The outcome of a quadrature or a summation.

    Examples:
        >>> report = NumericReport(1.0, 1e-14, 21)
        >>> float(report)
        1.0
    """

    value: float
    """The estimate."""

    abs_error_estimate: float
    """An estimate of the absolute error, non-negative."""

    evaluations: int
    """The number of integrand evaluations."""

    def __post_init__(self) -> None:
        if not self.abs_error_estimate >= 0:
            raise ValueError(
                f"abs_error_estimate must be non-negative, got {self.abs_error_estimate}"
            )
        if self.evaluations <= 0:
            raise ValueError(f"evaluations must be positive, got {self.evaluations}")

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other: NumericReport) -> NumericReport:
        return NumericReport(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> NumericReport:
        """Return the report of factor times the estimate.

        Args:
            factor (float): The scaling factor.

        Returns:
            NumericReport: The scaled report.
        """
        return NumericReport(
            factor * self.value, abs(factor) * self.abs_error_estimate, self.evaluations
        )

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "evaluations": self.evaluations,
        }
