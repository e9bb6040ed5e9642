"""Exceptions raised by the steinforge modules.

Every exception derives from SteinForgeError and from the closest builtin exception, so callers
catching ValueError or ArithmeticError keep working.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .numerics import NumericReport


class SteinForgeError(Exception):
    """Base class of all steinforge errors."""


class NumericError(SteinForgeError, ArithmeticError):
    """A numerical procedure failed."""


class DivergenceError(NumericError):
    """An integral or a series did not converge within its budget.

    Args:
        message (str): The error message.
        partial (NumericReport | None, optional): The last estimate before giving up.
            Defaults to None.

    Examples:
        >>> error = DivergenceError("no convergence", partial=None)
        >>> error.partial is None
        True
    """

    partial: NumericReport | None

    def __init__(self, message: str, partial: NumericReport | None = None) -> None:
        super().__init__(message)
        self.partial = partial


class EvaluationError(NumericError):
    """A callable returned NaN or failed to evaluate.

    Args:
        message (str): The error message.
        point (Any, optional): The point where the evaluation failed. Defaults to None.
    """

    point: Any

    def __init__(self, message: str, point: Any = None) -> None:
        super().__init__(message)
        self.point = point


class CatalogError(SteinForgeError, LookupError):
    """A family name is unknown to the catalog."""


class ParameterError(SteinForgeError, ValueError):
    """A parameter is outside its admissible domain."""


class SupportError(SteinForgeError, ValueError):
    """A point lies outside the support where it is required to lie inside."""


class DegenerateDensityError(SteinForgeError, ArithmeticError):
    """A density vanishes at a point of its support where it is used as a divisor."""


class BoundaryError(SteinForgeError, ArithmeticError):
    """An operator was evaluated at a singular support endpoint."""


class ConditioningError(SteinForgeError, ArithmeticError):
    """A conditioning event has zero probability."""


class SolverError(SteinForgeError, ArithmeticError):
    """A Stein equation could not be solved."""


class DegenerateBatteryError(SteinForgeError, ArithmeticError):
    """Every member of a battery has zero empirical deviation."""


class CapabilityError(SteinForgeError, NotImplementedError):
    """A family lacks a capability, such as a sampler."""


class InputError(SteinForgeError, ValueError):
    """An input file is empty or malformed.

    Args:
        message (str): The error message.
        line (int | None, optional): The 1-based line number of the offending record.
            Defaults to None.
    """

    line: int | None

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UsageError(SteinForgeError, ValueError):
    """A run configuration violates its schema.

    Args:
        message (str): The error message.
        field (str | None, optional): The dotted path of the offending field. Defaults to None.
    """

    field: str | None

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
