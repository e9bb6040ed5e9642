"""The steinforge command line."""

__all__ = [
    "build_parser",
    "COMMANDS",
    "load_config",
    "main",
    "parse_config",
    "run",
    "RunConfig",
]

from .commands import run
from .config import COMMANDS, RunConfig, load_config, parse_config
from .main import build_parser, main
