"""Type coercion and argument validation utilities."""

from __future__ import annotations

import math
from typing import Any, Sequence


def get_int(value, default: int = 0) -> int:
    """Convert a value to an integer, if possible.

    Args:
        value: The value to convert.
        default: The default value to return if conversion fails. Defaults to 0.

    Returns:
        int: The converted integer value, or the default if conversion fails.

    Example:
        >>> get_int("42")
        42
        >>> get_int("abc", default=10)
        10
    """
    try:
        return int(value)
    except (ValueError, TypeError, OverflowError):
        return default


def get_float(value, default: float = 0.0) -> float:
    """Convert a value to a float, if possible.

    Decimal commas are accepted, and the strings "inf" and "-inf" map to infinities.

    Args:
        value: The value to convert.
        default: The default value to return if conversion fails. Defaults to 0.0.

    Returns:
        float: The converted float value, or the default if conversion fails.

    Example:
        >>> get_float("3,14")
        3.14
        >>> get_float("-inf")
        -inf
        >>> get_float(None, default=2.5)
        2.5
    """
    if isinstance(value, str):
        value = value.strip().replace(",", ".")
    try:
        return float(value)
    except (ValueError, TypeError):
        return default


def parse_vector(value: Any, name: str = "value") -> tuple[float, ...]:
    """Parse a real vector from a number, a sequence, or a comma-separated string.

    Args:
        value (Any): The value to parse, e.g. 0.5, [0.5, 1], or "0.5,1".
        name (str, optional): The name of the value for error messages. Defaults to "value".

    Returns:
        tuple[float, ...]: The parsed vector.

    Raises:
        ValueError: If the value is empty or contains a non-numeric component.

    Example:
        >>> parse_vector("0.5,1")
        (0.5, 1.0)
        >>> parse_vector(2)
        (2.0,)
        >>> parse_vector("a")
        Traceback (most recent call last):
            ...
        ValueError: value must be a real vector, got 'a'
    """
    if isinstance(value, str):
        items: Sequence[Any] = [item for item in value.split(",") if item.strip()]
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        items = [value]
    elif isinstance(value, Sequence):
        items = value
    else:
        items = []

    vector = tuple(get_float(item, default=math.nan) for item in items)
    if not vector or any(math.isnan(item) for item in vector):
        raise ValueError(f"{name} must be a real vector, got {value!r}")
    return vector


def assert_non_negative_integer(value: int, name: str = "value") -> None:
    """Assert that a value is a non-negative integer.

    Args:
        value: The value to check.
        name: The name of the value for error messages. Defaults to "value".

    Raises:
        ValueError: If the value is not a non-negative integer.

    Example:
        >>> assert_non_negative_integer(5)
        >>> assert_non_negative_integer(-1)
        Traceback (most recent call last):
            ...
        ValueError: value must be a non-negative integer, got -1
    """
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value}")


def assert_positive(value: float, name: str = "value") -> None:
    """Assert that a value is a finite positive real.

    Args:
        value: The value to check.
        name: The name of the value for error messages. Defaults to "value".

    Raises:
        ValueError: If the value is not a finite positive real.

    Example:
        >>> assert_positive(1e-10, "tolerance")
        >>> assert_positive(0, "tolerance")
        Traceback (most recent call last):
            ...
        ValueError: tolerance must be a positive real, got 0
    """
    if (
        isinstance(value, bool)
        or not isinstance(value, (int, float))
        or not math.isfinite(value)
        or value <= 0
    ):
        raise ValueError(f"{name} must be a positive real, got {value}")


def assert_probability(value: float, name: str = "value") -> None:
    """Assert that a value lies in the open interval (0, 1).

    Args:
        value: The value to check.
        name: The name of the value for error messages. Defaults to "value".

    Raises:
        ValueError: If the value is not in (0, 1).

    Example:
        >>> assert_probability(0.05, "alpha")
        >>> assert_probability(1.0, "alpha")
        Traceback (most recent call last):
            ...
        ValueError: alpha must lie in (0, 1), got 1.0
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0 < value < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
