"""Argument parsing and the entry point of the steinforge command."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from ..errors import CatalogError, SteinForgeError, UsageError
from .commands import EXIT_INCONCLUSIVE, EXIT_USAGE, run
from .config import COMMANDS, load_config, parse_config

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

DEFAULT_LOG_LEVEL = "WARNING"

COMMAND_HELP = {
    "verify": "check both directions of a characterization",
    "solve": "solve the Stein equation for event indicators",
    "score": "check the score-function factorization of a pair of families",
    "gof": "test a sample file against the target",
    "list-families": "describe the available families",
}


def _common_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="JSON run configuration, overridden by flags")
    parser.add_argument("--family", help="target family name")
    parser.add_argument("--family-file", dest="family_file", help="JSON family descriptor")
    parser.add_argument("--theta0", help="target parameter, comma separated")
    parser.add_argument("--flavor", help="operator flavor")
    parser.add_argument(
        "--set", dest="events", action="append", help="event set such as le:0, repeatable"
    )
    parser.add_argument("--alt", dest="alternative", help='alternative law, "name@theta"')
    parser.add_argument("--against", help="second family of a score run")
    parser.add_argument(
        "--assume", dest="assumptions", action="append", help="assumption to check, repeatable"
    )
    parser.add_argument("--tolerance", type=float, help="reporting tolerance")
    parser.add_argument("--alpha", type=float, help="test level")
    parser.add_argument("--seed", type=int, help="calibration seed")
    parser.add_argument("--n-sim", dest="n_sim", type=int, help="calibration replications")
    parser.add_argument("--samples", help="sample file, csv or jsonl")
    parser.add_argument("--out", help="output directory, standard output when omitted")
    parser.add_argument(
        "--no-check",
        dest="check",
        action="store_const",
        const=False,
        help="skip the admissibility checks",
    )
    parser.add_argument(
        "--deterministic",
        action="store_const",
        const=True,
        help="leave timestamps out of the outputs",
    )
    parser.add_argument(
        "--log-level", dest="log_level", choices=LOG_LEVELS, default=DEFAULT_LOG_LEVEL
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Build the command line parser.

    Returns:
        argparse.ArgumentParser: A parser with one subcommand per command.

    Examples:
        >>> build_parser().parse_args(["verify", "--family", "gaussian_loc"]).family
        'gaussian_loc'
    """
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="steinforge", description="Stein characterizations of parametric families."
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in COMMANDS:
        commands.add_parser(command, parents=[common], help=COMMAND_HELP[command])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line.

    Args:
        argv (Sequence[str] | None, optional): The arguments. Defaults to sys.argv.

    Returns:
        int: The exit status, 2 on usage errors and 3 on numerical failures.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("config", "log_level") and value is not None
    }

    try:
        data = load_config(args.config) if args.config else None
        config = parse_config(data, overrides)
    except UsageError as e:
        print(f"steinforge: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return run(config)
    except (UsageError, CatalogError) as e:
        print(f"steinforge: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SteinForgeError, OSError) as e:
        logger.debug("Run failed", exc_info=True)
        print(f"steinforge: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
