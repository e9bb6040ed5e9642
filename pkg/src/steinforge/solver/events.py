"""Event sets A driving the centered indicators of the Stein equation."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

import numpy as np

from ..errors import ParameterError
from ..families import ParametricFamily, Theta, probability
from ..numerics import Domain, Interval, IntRange
from ..utils import parse_vector


class EventKind(str, Enum):
    """The shape of an event set."""

    HALF_LINE_LE = "le"
    INTERVAL = "interval"
    FINITE_INT_SET = "int"
    FULL = "full"


def _number(value: float) -> str:
    return f"{value:g}" if math.isfinite(value) else ("inf" if value > 0 else "-inf")


@dataclass(frozen=True)
class EventSet:
    """A measurable set A of the sample space.

    The kinds are:

    - `le`: the half-line (-inf, c]
    - `interval`: the half-open interval (a, b]
    - `int`: a finite set of integers, for discrete families
    - `full`: the whole support

    Events are written `le:0`, `interval:0,1`, `int:{0,2}` or `full` in configurations and on
    the command line.

    Examples:
        >>> event = EventSet.parse("le:0.5")
        >>> event.contains(np.array([0.0, 1.0]))
        array([ True, False])
        >>> str(EventSet.parse("int:{2, 0}"))
        'int:{0,2}'
    """

    kind: EventKind
    """The kind of set."""

    bounds: tuple[float, ...] = ()
    """The upper end c, the ends (a, b), or the sorted integers of the set."""

    def __post_init__(self) -> None:
        kind = EventKind(self.kind)
        bounds = tuple(float(value) for value in self.bounds)
        if kind == EventKind.HALF_LINE_LE and len(bounds) != 1:
            raise ParameterError(f"A half-line needs one bound, got {bounds}")
        if kind == EventKind.INTERVAL and (len(bounds) != 2 or bounds[0] > bounds[1]):
            raise ParameterError(f"An interval needs two ordered bounds, got {bounds}")
        if kind == EventKind.FINITE_INT_SET:
            if not bounds or any(not value.is_integer() for value in bounds):
                raise ParameterError(f"An integer set needs integer members, got {bounds}")
            bounds = tuple(sorted(set(bounds)))
        if kind == EventKind.FULL and bounds:
            raise ParameterError(f"The full set takes no bounds, got {bounds}")
        if any(math.isnan(value) for value in bounds):
            raise ParameterError(f"Event bounds must not be NaN, got {bounds}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def half_line(cls, upper: float) -> EventSet:
        """Return the half-line (-inf, upper]."""
        return cls(EventKind.HALF_LINE_LE, (upper,))

    @classmethod
    def interval(cls, lower: float, upper: float) -> EventSet:
        """Return the interval (lower, upper]."""
        return cls(EventKind.INTERVAL, (lower, upper))

    @classmethod
    def integers(cls, members: Iterable[int]) -> EventSet:
        """Return a finite set of integers."""
        return cls(EventKind.FINITE_INT_SET, tuple(members))

    @classmethod
    def full(cls) -> EventSet:
        """Return the whole support."""
        return cls(EventKind.FULL)

    @classmethod
    def parse(cls, value: Any) -> EventSet:
        """Parse an event written as `kind:bounds`.

        Args:
            value (Any): The text, an EventSet, or a mapping with `kind` and `bounds`.

        Returns:
            EventSet: The event.

        Raises:
            ParameterError: If the text is malformed.

        Examples:
            >>> EventSet.parse("interval:0,1")
            EventSet(kind=<EventKind.INTERVAL: 'interval'>, bounds=(0.0, 1.0))
            >>> EventSet.parse("full").kind
            <EventKind.FULL: 'full'>
        """
        if isinstance(value, EventSet):
            return value
        if isinstance(value, dict):
            return cls.from_dict(value)

        text = str(value).strip()
        kind_text, _, bounds_text = text.partition(":")
        try:
            kind = EventKind(kind_text.strip().lower())
        except ValueError as e:
            kinds = ", ".join(kind.value for kind in EventKind)
            raise ParameterError(f"Event kind must be one of {kinds}, got {text!r}") from e

        if kind == EventKind.FULL:
            if bounds_text.strip():
                raise ParameterError(f"The full set takes no bounds, got {text!r}")
            return cls(kind)
        bounds_text = re.sub(r"[{}\s]", "", bounds_text)
        try:
            bounds = parse_vector(bounds_text, "event bounds")
        except ValueError as e:
            raise ParameterError(f"Malformed event {text!r}: {e}") from e
        return cls(kind, bounds)

    @classmethod
    def from_dict(cls, data: dict) -> EventSet:
        """Rebuild an event from its JSON representation."""
        try:
            return cls(EventKind(data["kind"]), tuple(data.get("bounds", ())))
        except (KeyError, ValueError, TypeError) as e:
            raise ParameterError(f"Malformed event {data!r}") from e

    def check(self, family: ParametricFamily) -> EventSet:
        """Check that the event fits a family and return it.

        Raises:
            ParameterError: If a set of integers is used with a continuous family.
        """
        if self.kind == EventKind.FINITE_INT_SET and not family.discrete:
            raise ParameterError(
                f"Integer sets are null sets of the continuous family {family.name}"
            )
        return self

    def contains(self, x: Any) -> bool | np.ndarray:
        """Evaluate the indicator I_A.

        Args:
            x (Any): A point or an array of points.

        Returns:
            bool | np.ndarray: True where x lies in A.
        """
        values = np.asarray(x, dtype=float)
        if self.kind == EventKind.HALF_LINE_LE:
            result = values <= self.bounds[0]
        elif self.kind == EventKind.INTERVAL:
            result = (values > self.bounds[0]) & (values <= self.bounds[1])
        elif self.kind == EventKind.FINITE_INT_SET:
            result = np.isin(values, self.bounds)
        else:
            result = ~np.isnan(values)
        return bool(result) if np.ndim(x) == 0 else result

    def regions(self, support: Domain) -> list[Domain]:
        """Split A inside a support into disjoint domains.

        Args:
            support (Domain): An Interval or an IntRange.

        Returns:
            list[Domain]: The pieces of A within the support, of the support's type.
        """
        if isinstance(support, IntRange):
            return self._integer_regions(support)
        return self._interval_regions(Interval(support.lo, support.hi))

    def _interval_regions(self, support: Interval) -> list[Domain]:
        if self.kind == EventKind.FULL:
            pieces = [support]
        elif self.kind == EventKind.HALF_LINE_LE:
            pieces = [Interval(-math.inf, self.bounds[0]).intersect(support)]
        elif self.kind == EventKind.INTERVAL:
            pieces = [Interval(*self.bounds).intersect(support)]
        else:
            pieces = []
        return [piece for piece in pieces if piece is not None and piece.has_interior]

    def _integer_regions(self, support: IntRange) -> list[Domain]:
        if self.kind == EventKind.FINITE_INT_SET:
            return [
                IntRange(int(value), int(value))
                for value in self.bounds
                if support.contains(value)
            ]
        if self.kind == EventKind.FULL:
            return [support]
        if self.kind == EventKind.HALF_LINE_LE:
            lower, upper = -math.inf, self.bounds[0]
        else:
            lower, upper = self.bounds
        lower = math.floor(lower) + 1 if math.isfinite(lower) else support.lo
        upper = math.floor(upper) if math.isfinite(upper) else upper
        if upper < lower:
            return []
        piece = IntRange(lower, upper).intersect(support)
        return [] if piece is None else [piece]

    def mass(self, family: ParametricFamily, theta: Theta, within: Domain | None = None) -> float:
        """Return P_theta(A), or P_theta(A within a domain).

        Args:
            family (ParametricFamily): The family.
            theta (Theta): The parameter.
            within (Domain | None, optional): The domain that A is cut to. Defaults to the
                support S_theta.

        Returns:
            float: The probability.
        """
        within = family.support_fn(theta) if within is None else within
        return probability(family, theta, self.regions(within))

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {"kind": self.kind.value, "bounds": list(self.bounds)}

    @property
    def label(self) -> str:
        """Return a mathematical label of the set."""
        if self.kind == EventKind.HALF_LINE_LE:
            return f"(-inf, {_number(self.bounds[0])}]"
        if self.kind == EventKind.INTERVAL:
            return f"({_number(self.bounds[0])}, {_number(self.bounds[1])}]"
        if self.kind == EventKind.FINITE_INT_SET:
            return "{" + ", ".join(f"{int(value)}" for value in self.bounds) + "}"
        return "support"

    def __str__(self) -> str:
        if self.kind == EventKind.FULL:
            return self.kind.value
        if self.kind == EventKind.FINITE_INT_SET:
            return "int:{" + ",".join(f"{int(value)}" for value in self.bounds) + "}"
        return f"{self.kind.value}:" + ",".join(_number(value) for value in self.bounds)
