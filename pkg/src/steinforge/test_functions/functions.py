"""Test functions f0 and their two-argument forms f(x;theta)."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable

import numpy as np

from ..errors import EvaluationError
from ..numerics import central_diff
from ..numerics.differences import STEP_FACTOR

Scalar = Callable[[Any], Any]
TwoArgument = Callable[[Any, tuple[float, ...]], Any]


def _output(value: Any, x: Any) -> float | np.ndarray:
    value = np.asarray(value, dtype=float)
    if np.ndim(x) == 0:
        return float(value)
    return np.broadcast_to(value, np.shape(x)).copy()


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A test function f0 with an optional analytic derivative and two-argument form.

    The callables are vectorized over numpy arrays. Without an analytic derivative, the spatial
    derivative is a central difference. Discrete operators use the forward difference instead.

    Examples:
        >>> square = TestFunction(lambda x: x * x, lambda x: 2 * x, label="x^2")
        >>> square.eval(3.0)
        9.0
        >>> square.derivative(3.0)
        6.0
        >>> (2 * square + square).eval(1.0)
        3.0
    """

    __test__ = False

    function: Scalar
    """The vectorized function f0."""

    spatial_derivative: Scalar | None = None
    """The vectorized derivative f0', if known."""

    two_arg_form: TwoArgument | None = None
    """A two-argument form f(x;theta) for the generic operator."""

    label: str = "f"
    """A human-readable label."""

    gradient: Callable[[np.ndarray], np.ndarray] | None = None
    """The gradient of a function of a vector, for multivariate operators."""

    def eval(self, x: Any) -> float | np.ndarray:
        """Evaluate f0.

        Args:
            x (Any): A point or an array of points.

        Returns:
            float | np.ndarray: The values, a float for a scalar x.

        Raises:
            EvaluationError: If the function returns NaN.
        """
        with np.errstate(all="ignore"):
            values = _output(self.function(np.asarray(x, dtype=float)), x)
        if np.any(np.isnan(values)):
            raise EvaluationError(f"{self.label} returned NaN", point=x)
        return values

    def derivative(self, x: Any) -> float | np.ndarray:
        """Evaluate f0', analytically when known, otherwise by central difference.

        Args:
            x (Any): A point or an array of points.

        Returns:
            float | np.ndarray: The derivative values.
        """
        values = np.asarray(x, dtype=float)
        if self.spatial_derivative is not None:
            with np.errstate(all="ignore"):
                return _output(self.spatial_derivative(values), x)
        h = STEP_FACTOR * np.maximum(1.0, np.abs(values))
        with np.errstate(all="ignore"):
            upper = np.asarray(self.function(values + h), dtype=float)
            lower = np.asarray(self.function(values - h), dtype=float)
        return _output((upper - lower) / (2.0 * h), x)

    def forward_difference(self, x: Any) -> float | np.ndarray:
        """Evaluate f0(x + 1) - f0(x).

        Args:
            x (Any): A point or an array of points.

        Returns:
            float | np.ndarray: The differences.
        """
        values = np.asarray(x, dtype=float)
        return _output(self.eval(values + 1) - self.eval(values), x)

    def partial(self, x: Any, coordinate: int) -> float:
        """Evaluate the partial derivative of a function of a vector.

        Args:
            x (Any): The vector.
            coordinate (int): The 0-based coordinate.

        Returns:
            float: The partial derivative.
        """
        vector = np.asarray(x, dtype=float)
        if self.gradient is not None:
            return float(np.asarray(self.gradient(vector), dtype=float)[coordinate])

        def along(u: float) -> float:
            moved = vector.copy()
            moved[coordinate] = u
            return float(self.function(moved))

        return float(central_diff(along, float(vector[coordinate])))

    def derivative_mismatch(self, grid: Iterable[float]) -> float:
        """Return the largest gap between the analytic and the numeric derivative on a grid.

        Args:
            grid (Iterable[float]): The probe points.

        Returns:
            float: The largest absolute gap, 0 without an analytic derivative.
        """
        if self.spatial_derivative is None:
            return 0.0
        worst = 0.0
        for x in grid:
            numeric = central_diff(lambda u: float(self.function(u)), float(x))
            worst = max(worst, abs(float(self.spatial_derivative(np.float64(x))) - numeric))
        return worst

    def with_two_arg_form(self, two_arg_form: TwoArgument) -> TestFunction:
        """Return a copy carrying a two-argument form.

        Args:
            two_arg_form (TwoArgument): The form f(x;theta).

        Returns:
            TestFunction: The copy.
        """
        return replace(self, two_arg_form=two_arg_form)

    def weighted(
        self, weight: Scalar, weight_derivative: Scalar, label: str | None = None
    ) -> TestFunction:
        """Return the product w(x) f0(x) with its product-rule derivative.

        Args:
            weight (Scalar): The weight w.
            weight_derivative (Scalar): Its derivative w'.
            label (str | None, optional): The label of the product. Defaults to "w*<label>".

        Returns:
            TestFunction: The product, without a two-argument form.

        Examples:
            >>> f = TestFunction(lambda x: x, lambda x: np.ones_like(x), label="x")
            >>> g = f.weighted(lambda t: 4 - t * t, lambda t: -2 * t)
            >>> g.eval(1.0), g.derivative(1.0)
            (3.0, 1.0)
        """
        return TestFunction(
            lambda x: weight(x) * self.function(x),
            lambda x: weight_derivative(x) * self.function(x) + weight(x) * self.derivative(x),
            label=label or f"w*{self.label}",
        )

    def scaled(self, factor: float) -> TestFunction:
        """Return factor * f0.

        Args:
            factor (float): The factor.

        Returns:
            TestFunction: The scaled function.
        """
        two_arg = self.two_arg_form
        return TestFunction(
            lambda x: factor * np.asarray(self.function(x), dtype=float),
            None if self.spatial_derivative is None else (lambda x: factor * self.derivative(x)),
            None if two_arg is None else (lambda x, theta: factor * np.asarray(two_arg(x, theta))),
            label=f"{factor:g}*{self.label}",
        )

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "label": self.label,
            "analytic_derivative": self.spatial_derivative is not None,
            "two_arg_form": self.two_arg_form is not None,
        }

    def __call__(self, x: Any) -> float | np.ndarray:
        return self.eval(x)

    def __add__(self, other: TestFunction) -> TestFunction:
        if not isinstance(other, TestFunction):
            return NotImplemented
        both_derivatives = self.spatial_derivative is not None and (
            other.spatial_derivative is not None
        )
        both_forms = self.two_arg_form is not None and other.two_arg_form is not None

        def two_arg_sum(x, theta):
            first = np.asarray(self.two_arg_form(x, theta), dtype=float)
            return first + np.asarray(other.two_arg_form(x, theta), dtype=float)

        return TestFunction(
            lambda x: np.asarray(self.function(x), dtype=float) + other.function(x),
            (lambda x: self.derivative(x) + other.derivative(x)) if both_derivatives else None,
            two_arg_sum if both_forms else None,
            label=f"{self.label}+{other.label}",
        )

    def __mul__(self, factor: float) -> TestFunction:
        if isinstance(factor, TestFunction):
            return NotImplemented
        return self.scaled(float(factor))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return self.label


def constant(value: float = 1.0) -> TestFunction:
    """Return the constant test function.

    Args:
        value (float, optional): The constant. Defaults to 1.0.

    Returns:
        TestFunction: The function.

    Examples:
        >>> constant(2.0).eval(np.array([1.0, 5.0]))
        array([2., 2.])
    """
    return TestFunction(
        lambda x: np.full_like(np.asarray(x, dtype=float), value),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        lambda x, theta: np.full_like(np.asarray(x, dtype=float), value),
        label=f"{value:g}",
    )


def identity() -> TestFunction:
    """Return the identity test function f0(x) = x."""
    return TestFunction(
        lambda x: np.asarray(x, dtype=float),
        lambda x: np.ones_like(np.asarray(x, dtype=float)),
        label="x",
    )


def from_callable(
    function: Scalar,
    derivative: Scalar | None = None,
    label: str | None = None,
) -> TestFunction:
    """Wrap a plain callable, vectorizing it when it only accepts scalars.

    Args:
        function (Scalar): The function.
        derivative (Scalar | None, optional): Its derivative. Defaults to None.
        label (str | None, optional): The label. Defaults to the function name.

    Returns:
        TestFunction: The test function.
    """

    def vectorize(callable_: Scalar) -> Scalar:
        def wrapped(x):
            try:
                return callable_(x)
            except TypeError:
                return np.vectorize(callable_, otypes=[float])(x)

        return wrapped

    return TestFunction(
        vectorize(function),
        None if derivative is None else vectorize(derivative),
        label=label or getattr(function, "__name__", "f"),
    )
