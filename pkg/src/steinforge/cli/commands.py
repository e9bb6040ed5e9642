"""The commands of the command line and their exit statuses."""

from __future__ import annotations

import datetime
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable

from ..characterize import ReportVerdict, characterize
from ..errors import ParameterError, SupportError, UsageError
from ..families import (
    OperatorFlavor,
    ParametricFamily,
    ParametrizedLaw,
    get_family,
    interior_grid,
    list_families,
    load_family,
)
from ..gof import Decision, gof_test, load_samples
from ..score_factor import (
    ScorePair,
    common_support_pair,
    factorization_check,
    score_rows,
)
from ..solver import solve
from ..test_functions import adapt_battery, battery_from_spec
from ..utils import EnhancedJSONEncoder, File, sanitize_json
from .config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

VERDICT_STATUS = {
    ReportVerdict.CHARACTERIZED: EXIT_OK,
    ReportVerdict.VIOLATED: EXIT_FAILED,
    ReportVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def to_json(data: Any) -> str:
    """Serialize with sorted keys and two-space indentation, as the report files are written."""
    encoded = json.loads(json.dumps(data, cls=EnhancedJSONEncoder, allow_nan=True))
    return json.dumps(sanitize_json(encoded), indent=2, sort_keys=True, ensure_ascii=False)


def _emit(config: RunConfig, name: str, payload: Any) -> None:
    if config.out is None:
        if name.endswith(".json"):
            sys.stdout.write(to_json(payload) + "\n")
        return
    path = Path(config.out) / name
    File(path).write(payload)
    logger.info("Wrote %s", path)


def _envelope(config: RunConfig, result: dict) -> dict:
    data = {"config": config.to_dict(), "result": result}
    if not config.deterministic:
        now = datetime.datetime.now(datetime.timezone.utc)
        data["generated_at"] = now.isoformat(timespec="seconds")
    return data


def resolve_family(config: RunConfig) -> ParametricFamily:
    """Return the target family of a run, loading its descriptor file when one is given."""
    if config.family_file is not None:
        family = load_family(config.family_file)
        if config.family is not None and config.family != family.name:
            raise UsageError(
                f"{config.family_file} describes {family.name}, not {config.family}", "family"
            )
        return family
    return get_family(config.family, config.params)


def resolve_alternative(config: RunConfig, family: ParametricFamily) -> ParametrizedLaw | None:
    """Parse the alternative law, written "name@theta" or "theta" for the target family.

    Args:
        config (RunConfig): The run.
        family (ParametricFamily): The target family.

    Returns:
        ParametrizedLaw | None: The alternative, None when the run has none.

    Raises:
        UsageError: If the text names no law.
    """
    if config.alternative is None:
        return None
    name, _, theta = config.alternative.rpartition("@")
    try:
        alternative = get_family(name) if name else family
        return alternative.at(theta)
    except (ParameterError, LookupError) as e:
        raise UsageError(str(e), "alternative") from e


def _battery(config: RunConfig, family: ParametricFamily):
    try:
        return adapt_battery(battery_from_spec(config.battery), family)
    except ParameterError as e:
        raise UsageError(str(e), "battery") from e


def run_verify(config: RunConfig) -> int:
    """Check a characterization and write report.json and report.md."""
    family = resolve_family(config)
    report = characterize(
        family,
        config.theta0,
        config.flavor,
        _battery(config, family),
        config.events,
        resolve_alternative(config, family),
        config.check,
        config.assumptions,
        config.tolerance,
    )
    _emit(config, "report.json", _envelope(config, report.to_dict()))
    _emit(config, "report.md", report.to_markdown())
    return VERDICT_STATUS[report.verdict]


def run_solve(config: RunConfig) -> int:
    """Solve the Stein equation of every event and write solution.csv and solution.json."""
    family = resolve_family(config)
    flavor = None if config.flavor is None else OperatorFlavor.parse(config.flavor)
    options = {} if flavor is None or family.discrete else {"flavor": flavor}

    rows, summaries = [], []
    for event in config.events:
        solution = solve(family, config.theta0, event, **options)
        summaries.append(solution.to_dict())
        rows.extend({"event": str(solution.event), **row} for row in solution.to_rows())

    _emit(config, "solution.csv", rows)
    _emit(config, "solution.json", _envelope(config, {"solutions": summaries}))
    solved = all(summary["within_tolerance"] for summary in summaries)
    return EXIT_OK if solved else EXIT_INCONCLUSIVE


def _score_pair(config: RunConfig, family: ParametricFamily) -> ScorePair:
    other = get_family(config.against)
    try:
        return ScorePair.create(family, other, config.theta0)
    except SupportError:
        logger.info("Restricting %s and %s to their common support", family.name, other.name)
        return common_support_pair(family, other, config.theta0)


def run_score(config: RunConfig) -> int:
    """Tabulate the generalized score and check the factorization for every battery member."""
    family = resolve_family(config)
    pair = _score_pair(config, family)
    grid = interior_grid(pair.p, pair.theta0, 100)
    flavor = config.flavor or pair.p.default_flavor
    reports = [
        factorization_check(pair, f, grid, flavor) for f in _battery(config, pair.p)
    ]

    summary = {
        "pair": pair.to_dict(),
        "tolerance": config.tolerance,
        "max_deviation": max(
            (report.max_deviation for report in reports if not math.isnan(report.max_deviation)),
            default=math.nan,
        ),
        "functions": [
            {
                "function": report.function,
                "max_deviation": report.max_deviation,
                "worst_x": report.worst_x,
                "failures": len(report.failures),
            }
            for report in reports
        ],
    }
    _emit(config, "score.csv", score_rows(pair, grid))
    _emit(config, "score.json", _envelope(config, summary))
    if any(report.failures for report in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK if all(report.holds(config.tolerance) for report in reports) else EXIT_FAILED


def run_gof(config: RunConfig) -> int:
    """Test a sample file against the target and write gof.json."""
    family = resolve_family(config)
    samples = load_samples(config.samples, discrete=family.discrete)
    result = gof_test(
        samples,
        family,
        config.theta0,
        config.flavor,
        _battery(config, family),
        config.alpha,
        config.seed,
        config.n_sim,
    )
    _emit(config, "gof.json", _envelope(config, result.to_dict()))
    return EXIT_FAILED if result.decision == Decision.REJECT else EXIT_OK


def run_list_families(config: RunConfig) -> int:
    """Describe the builtin and registered families."""
    if config.family_file is not None:
        load_family(config.family_file)
    _emit(config, "families.json", list_families())
    return EXIT_OK


COMMAND_RUNNERS: dict[str, Callable[[RunConfig], int]] = {
    "verify": run_verify,
    "solve": run_solve,
    "score": run_score,
    "gof": run_gof,
    "list-families": run_list_families,
}


def run(config: RunConfig) -> int:
    """Run a command.

    Args:
        config (RunConfig): The validated run.

    Returns:
        int: 0 when characterized or accepted, 1 when violated or rejected, 3 when inconclusive.
    """
    logger.info("Running %s", config.command)
    return COMMAND_RUNNERS[config.command](config)
