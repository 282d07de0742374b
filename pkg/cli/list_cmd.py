"""`list`: registry ids with their flags."""

import argparse
import logging

from cli import EXIT_PASS
from core.checks import THEOREMS, theorem_ids
from core.funcspace import builtin_functions, builtin_weights
from utils.helpers import format_flags

logger = logging.getLogger(__name__)


def register(sub, parents) -> None:
    sub.add_parser("list", parents=parents, help="list theorems, functions and weights")


def registry_lines() -> list[str]:
    """Alphabetical theorem, function and weight listings."""
    lines = ["theorems:"]
    for tid in theorem_ids():
        theorem = THEOREMS[tid]
        lines.append(f"  {tid:<24} [{', '.join(theorem.requires)}]  {theorem.summary}")
    lines.append("functions:")
    for f in sorted(builtin_functions(), key=lambda f: f.id):
        lines.append(f"  {f.id:<12} {f.description:<16} {f.domain.to_list()}  {format_flags(f.flags)}")
    lines.append("weights:")
    for p in sorted(builtin_weights(), key=lambda p: p.id):
        lines.append(f"  {p.id:<12} {p.description:<16} {format_flags(p.flags)}")
    return lines


def handle(args: argparse.Namespace, rule, tols) -> int:
    print("\n".join(registry_lines()))
    return EXIT_PASS
