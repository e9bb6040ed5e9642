"""Default tolerances and budgets of the numerical engine.

Environment Variables:
    STEINFORGE_TOL (str): Default absolute and relative tolerance. Defaults to "1e-10".
    STEINFORGE_MAX_TERMS (str): Term budget of infinite series. Defaults to "100000".
    STEINFORGE_CHECK_SECONDS (str): Wall-clock budget of assumption and condition checks.
        Defaults to "60".
"""

import logging
import os

from ..utils import get_float, get_int

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_TERMS = 100_000
DEFAULT_QUAD_LIMIT = 500
DEFAULT_CHECK_SECONDS = 60.0


def default_tolerance() -> float:
    """Return the default tolerance, honoring STEINFORGE_TOL.

    Invalid or non-positive values are ignored with a warning.

    Returns:
        float: The tolerance.

    Examples:
        >>> default_tolerance()
        1e-10
    """
    raw = os.getenv("STEINFORGE_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = get_float(raw, default=-1.0)
    if not value > 0:
        logger.warning("Ignoring invalid STEINFORGE_TOL=%s", raw)
        return DEFAULT_TOL
    return value


def default_max_terms() -> int:
    """Return the term budget of infinite series, honoring STEINFORGE_MAX_TERMS.

    Returns:
        int: The maximum number of terms.
    """
    value = get_int(os.getenv("STEINFORGE_MAX_TERMS"), DEFAULT_MAX_TERMS)
    return value if value > 0 else DEFAULT_MAX_TERMS


def default_check_seconds() -> float:
    """Return the wall-clock budget of semidecision checks, honoring STEINFORGE_CHECK_SECONDS.

    Returns:
        float: The budget in seconds.
    """
    value = get_float(os.getenv("STEINFORGE_CHECK_SECONDS"), DEFAULT_CHECK_SECONDS)
    return value if value > 0 else DEFAULT_CHECK_SECONDS
