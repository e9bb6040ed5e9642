"""Utilities package."""

__all__ = [
    "assert_non_negative_integer",
    "assert_positive",
    "assert_probability",
    "Budget",
    "BudgetExpired",
    "EnhancedJSONEncoder",
    "ensure_directory",
    "File",
    "FileType",
    "get_float",
    "get_int",
    "import_callable",
    "import_namespace",
    "parse_vector",
    "read_csv_file",
    "sanitize_json",
    "to_csv_row",
    "write_csv_file",
    "write_json_file",
]

from .budget import Budget, BudgetExpired
from .file import (
    EnhancedJSONEncoder,
    File,
    FileType,
    ensure_directory,
    read_csv_file,
    sanitize_json,
    to_csv_row,
    write_csv_file,
    write_json_file,
)
from .system import import_callable, import_namespace
from .types import (
    assert_non_negative_integer,
    assert_positive,
    assert_probability,
    get_float,
    get_int,
    parse_vector,
)
