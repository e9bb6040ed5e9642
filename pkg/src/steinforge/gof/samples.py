"""Samples of the data under test, read from CSV or JSONL files."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import InputError, ParameterError
from ..utils import File, FileType

logger = logging.getLogger(__name__)

# JSONL keys of the value and of the optional weight of a record
VALUE_KEY = "x"
WEIGHT_KEY = "w"


@dataclass
class SampleSet:
    """Observations, one value or one row of coordinates each, with optional weights.

    Weighted sets stand for quadrature-node samples whose weighted moments match a law.

    Examples:
        >>> samples = SampleSet(np.array([0.1, -0.2]))
        >>> samples.n
        2
    """

    values: np.ndarray
    source: str = "memory"
    weights: np.ndarray | None = None
    discrete: bool = False
    n: int = field(init=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim not in (1, 2) or len(self.values) == 0:
            raise ParameterError(f"A sample set needs at least one observation, got {self.source}")
        if not np.all(np.isfinite(self.values)):
            raise ParameterError(f"Samples from {self.source} must be finite")
        if self.discrete and not np.all(self.values == np.round(self.values)):
            raise ParameterError(f"Samples from {self.source} must be integers")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=float)
            if self.weights.shape != (len(self.values),):
                raise ParameterError(
                    f"Expected {len(self.values)} weights, got {self.weights.shape}"
                )
            if np.any(self.weights < 0) or not self.weights.sum() > 0:
                raise ParameterError("Weights must be non-negative with a positive total")
        self.n = len(self.values)

    @property
    def dimension(self) -> int:
        """Return the number of coordinates per observation."""
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    def column(self, coordinate: int) -> SampleSet:
        """Return the samples of one coordinate.

        Args:
            coordinate (int): The 0-based coordinate.

        Returns:
            SampleSet: A one-dimensional sample set.

        Raises:
            ParameterError: If the coordinate does not exist.
        """
        if not 0 <= coordinate < self.dimension:
            raise ParameterError(
                f"No coordinate {coordinate} in {self.dimension}-dimensional samples"
            )
        values = self.values if self.values.ndim == 1 else self.values[:, coordinate]
        return SampleSet(values, f"{self.source}[{coordinate}]", self.weights, self.discrete)

    def to_dict(self) -> dict:
        """Return a JSON-friendly summary."""
        return {
            "source": self.source,
            "n": self.n,
            "dimension": self.dimension,
            "weighted": self.weights is not None,
            "discrete": self.discrete,
        }


def _number(text: Any, line: int) -> float:
    if isinstance(text, bool):
        raise InputError(f"expected a number, got {text!r}", line)
    try:
        value = float(text)
    except (TypeError, ValueError) as e:
        raise InputError(f"expected a number, got {text!r}", line) from e
    if not math.isfinite(value):
        raise InputError(f"expected a finite number, got {text!r}", line)
    return value


def _is_header(cells: list[str]) -> bool:
    return all(cell.strip().isidentifier() for cell in cells)


def _csv_records(file: File) -> tuple[list[list[float]], list[float] | None]:
    rows = []
    for line, text in enumerate(file.readlines(), start=1):
        if not text.strip():
            continue
        cells = text.split(",")
        if not rows and line == 1 and _is_header(cells):
            logger.debug("Skipping the header of %s", file.path)
            continue
        rows.append([_number(cell.strip(), line) for cell in cells])
    return rows, None


def _jsonl_records(file: File) -> tuple[list[list[float]], list[float] | None]:
    rows, weights = [], []
    for line, text in enumerate(file.readlines(), start=1):
        if not text.strip():
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e.msg}", line) from e
        if isinstance(record, dict):
            if VALUE_KEY not in record:
                raise InputError(f"missing key {VALUE_KEY!r}", line)
            weights.append(_number(record.get(WEIGHT_KEY, 1.0), line))
            record = record[VALUE_KEY]
        else:
            weights.append(1.0)
        cells = record if isinstance(record, list) else [record]
        rows.append([_number(cell, line) for cell in cells])
    weighted = any(weight != 1.0 for weight in weights)
    return rows, weights if weighted else None


def load_samples(
    path: Path | str, file_format: FileType | str | None = None, discrete: bool = False
) -> SampleSet:
    """Read a sample set from a CSV or JSONL file.

    CSV files hold one observation per line, as a value or comma-separated coordinates, with an
    optional header line. JSONL files hold one number, list or object {"x": ..., "w": ...} per
    line.

    Args:
        path (Path | str): The file path.
        file_format (FileType | str | None, optional): "csv" or "jsonl". Defaults to the file
            extension.
        discrete (bool, optional): Whether the observations must be integers. Defaults to False.

    Returns:
        SampleSet: The samples.

    Raises:
        InputError: If the file is empty or a record is malformed, with its line number.
        FileNotFoundError: If the file does not exist.

    Examples:
        >>> load_samples("samples.csv").n
        2
    """
    file = File(path, file_format)
    if file.type == FileType.CSV:
        rows, weights = _csv_records(file)
    elif file.type == FileType.JSONL:
        rows, weights = _jsonl_records(file)
    else:
        raise InputError(f"Samples must be csv or jsonl, got {file.type.value}")

    if not rows:
        raise InputError(f"{file.path} holds no samples")
    widths = {len(row) for row in rows}
    if len(widths) > 1:
        raise InputError(f"{file.path} mixes {sorted(widths)} coordinates per record")
    values = np.array(rows, dtype=float)
    if values.shape[1] == 1:
        values = values[:, 0]

    try:
        samples = SampleSet(values, str(file.path), weights, discrete)
    except ParameterError as e:
        raise InputError(str(e)) from e
    logger.info("Loaded %d samples from %s", samples.n, file.path)
    return samples
