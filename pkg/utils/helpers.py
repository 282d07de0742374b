"""Parsing and formatting helpers for the command line."""

import json
import logging
from pathlib import Path

from core.errors import MalformedMatrixFileError, ParameterOutOfRangeError
from core.linalg import HermitianMatrix, Interval, matrix_from_record

logger = logging.getLogger(__name__)


def parse_interval(text: str) -> Interval:
    """Parse "lo,hi" (or "lo:hi") into an Interval."""
    sep = "," if "," in text else ":"
    parts = [p.strip() for p in text.split(sep)]
    if len(parts) != 2:
        raise ParameterOutOfRangeError(f"expected 'lo,hi', got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParameterOutOfRangeError(f"interval bounds must be numbers: {text!r}") from None
    return Interval(lo, hi)


def parse_id_list(text: str | None) -> tuple[str, ...]:
    """Comma-separated ids; empty entries dropped, order kept."""
    if not text:
        return ()
    return tuple(part.strip() for part in text.split(",") if part.strip())


def parse_seed(text: str) -> int:
    """Decimal or 0x-prefixed 64-bit seed."""
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise ValueError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def load_matrix_file(path: str | Path) -> HermitianMatrix:
    """Read a {"n", "re", "im"} matrix file."""
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise MalformedMatrixFileError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MalformedMatrixFileError(f"{path} is not valid JSON: {e}") from e
    matrix = matrix_from_record(record)
    logger.debug("Loaded %dx%d matrix from %s", matrix.n, matrix.n, path)
    return matrix


def format_margin(margin: float | None) -> str:
    if margin is None:
        return "n/a"
    return f"{margin:+.6e}"


def format_flags(flags) -> str:
    names = flags.names()
    return ",".join(names) if names else "-"


def format_instance(instance: dict) -> str:
    keys = ("f", "g", "p", "a", "b", "n", "alpha", "seed")
    return " ".join(f"{k}={instance[k]}" for k in keys if k in instance)


def format_result_line(result) -> str:
    """One-line summary: theorem, verdict, margin and the instance ids."""
    line = (f"{result.theorem_id:<24} {result.verdict.value:<17} "
            f"{format_margin(result.margin):>14}  {format_instance(result.instance)}")
    if result.error:
        line += f"  [{result.error}]"
    return line


def format_slack_table(verdict) -> list[str]:
    """Per-index slacks of one verdict, one line each."""
    if hasattr(verdict, "detail"):
        return [f"  {verdict.kind.value} k={k + 1}: {format_margin(s)}"
                for k, s in enumerate(verdict.detail)]
    return [f"  {verdict.name}: {verdict.lhs:.10g} <= {verdict.rhs:.10g} "
            f"(slack {format_margin(verdict.slack)})"]
