"""Run configurations of the command line, merged from flags, config files and defaults.

Precedence is flag, then config file, then environment, then built-in default.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..errors import ParameterError, UsageError
from ..families import Assumption, OperatorFlavor
from ..gof import default_n_sim
from ..solver import EventSet
from ..utils import File, get_float, get_int, parse_vector

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "solve", "score", "gof", "list-families")

# Reporting tolerance of discrepancies and factorization deviations
DEFAULT_TOLERANCE = 1e-6

DEFAULT_ALPHA = 0.05

DEFAULT_SEED = 0

CONFIG_KEYS = frozenset(
    {
        "command",
        "family",
        "params",
        "family_file",
        "theta0",
        "flavor",
        "battery",
        "events",
        "alternative",
        "against",
        "assumptions",
        "check",
        "tolerance",
        "alpha",
        "seed",
        "n_sim",
        "samples",
        "out",
        "deterministic",
    }
)


@dataclass(frozen=True)
class RunConfig:
    """A validated run of one command.

    Examples:
        >>> config = parse_config({"command": "verify", "family": "gaussian_loc", "theta0": [0]})
        >>> config.theta0
        (0.0,)
    """

    command: str
    family: str | None = None
    params: dict[str, Any] | None = None
    family_file: str | None = None
    theta0: tuple[float, ...] | None = None
    flavor: str | None = None
    battery: dict[str, Any] | None = None
    events: tuple[str, ...] = ()
    alternative: str | None = None
    """The alternative law, "name@theta" or "theta" for the target family."""

    against: str | None = None
    """The second family of a score run."""

    assumptions: tuple[str, ...] = ()
    check: bool = True
    tolerance: float = DEFAULT_TOLERANCE
    alpha: float = DEFAULT_ALPHA
    seed: int = DEFAULT_SEED
    n_sim: int = field(default_factory=default_n_sim)
    samples: str | None = None
    out: str | None = None
    deterministic: bool = False

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        data = asdict(self)
        data["theta0"] = None if self.theta0 is None else list(self.theta0)
        data["events"] = list(self.events)
        data["assumptions"] = list(self.assumptions)
        return data


def load_config(path: Path | str) -> dict[str, Any]:
    """Read a JSON run configuration.

    Args:
        path (Path | str): The file.

    Returns:
        dict[str, Any]: The raw configuration.

    Raises:
        UsageError: If the file cannot be read or does not hold an object.
    """
    try:
        data = File(path, "json").read()
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read {path}: {e}", "config") from e
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object", "config")
    return data


def _text(value: Any, name: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise UsageError(f"expected a non-empty string, got {value!r}", name)
    return value.strip()


def _texts(value: Any, name: str) -> tuple[str, ...]:
    items = [value] if isinstance(value, (str, dict)) else value
    if not isinstance(items, (list, tuple)):
        raise UsageError(f"expected a list, got {value!r}", name)
    return tuple(items)


def _flag(value: Any, name: str) -> bool:
    if not isinstance(value, bool):
        raise UsageError(f"expected true or false, got {value!r}", name)
    return value


def _events(value: Any) -> tuple[str, ...]:
    events = []
    for index, item in enumerate(_texts(value, "events")):
        try:
            events.append(str(EventSet.parse(item)))
        except ParameterError as e:
            raise UsageError(str(e), f"events[{index}]") from e
    return tuple(events)


def _assumptions(value: Any) -> tuple[str, ...]:
    names = []
    for index, item in enumerate(_texts(value, "assumptions")):
        try:
            names.append(Assumption.parse(item).value)
        except (ParameterError, ValueError) as e:
            raise UsageError(f"unknown assumption {item!r}", f"assumptions[{index}]") from e
    return tuple(names)


def _number(value: Any, name: str, parse, low: float, high: float = math.inf) -> Any:
    number = parse(value, math.nan) if isinstance(value, (str, int, float)) else math.nan
    if isinstance(value, bool) or not low < number < high:
        raise UsageError(f"expected a number in ({low:g}, {high:g}), got {value!r}", name)
    return number


def _normalize(data: Mapping[str, Any]) -> dict[str, Any]:
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError("unknown configuration key", unknown[0])

    values: dict[str, Any] = {}
    for key, value in data.items():
        if value is None:
            continue
        if key in ("family", "family_file", "alternative", "against", "samples", "out"):
            values[key] = _text(value, key)
        elif key == "command":
            if value not in COMMANDS:
                raise UsageError(f"expected one of {', '.join(COMMANDS)}, got {value!r}", key)
            values[key] = value
        elif key == "theta0":
            try:
                values[key] = parse_vector(value, key)
            except ValueError as e:
                raise UsageError(str(e), key) from e
        elif key == "flavor":
            try:
                values[key] = OperatorFlavor.parse(value).value
            except ParameterError as e:
                raise UsageError(str(e), key) from e
        elif key in ("params", "battery"):
            if not isinstance(value, dict):
                raise UsageError(f"expected an object, got {value!r}", key)
            values[key] = dict(value)
        elif key == "events":
            values[key] = _events(value)
        elif key == "assumptions":
            values[key] = _assumptions(value)
        elif key in ("check", "deterministic"):
            values[key] = _flag(value, key)
        elif key == "tolerance":
            values[key] = _number(value, key, get_float, 0.0)
        elif key == "alpha":
            values[key] = _number(value, key, get_float, 0.0, 1.0)
        elif key == "n_sim":
            values[key] = _number(value, key, get_int, 0)
        elif key == "seed":
            values[key] = _number(value, key, get_int, -1)
    return values


def parse_config(
    data: Mapping[str, Any] | None = None, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """Validate a run configuration, with flag values taking precedence.

    Environment Variables:
        STEINFORGE_N_SIM: The number of calibration replications when neither a flag nor the
            configuration sets it.

    Args:
        data (Mapping[str, Any] | None, optional): The configuration file content.
            Defaults to None.
        overrides (Mapping[str, Any] | None, optional): The flag values, None for unset flags.
            Defaults to None.

    Returns:
        RunConfig: The configuration.

    Raises:
        UsageError: If a key is unknown, a value is malformed or a required field is missing,
            naming the offending field.

    Examples:
        >>> parse_config({"command": "verify"})
        Traceback (most recent call last):
            ...
        steinforge.errors.UsageError: family: verify needs a family
    """
    values = _normalize(data or {})
    values.update(_normalize(overrides or {}))

    command = values.get("command")
    if command is None:
        raise UsageError("no command given", "command")
    if command != "list-families" and "family" not in values and "family_file" not in values:
        raise UsageError(f"{command} needs a family", "family")
    if command == "score" and "against" not in values:
        raise UsageError("score needs a second family", "against")
    if command == "gof" and "samples" not in values:
        raise UsageError("gof needs a sample file", "samples")
    if command == "solve" and not values.get("events"):
        raise UsageError("solve needs at least one event", "events")

    config = RunConfig(**values)
    logger.debug("Run configuration: %s", config)
    return config
