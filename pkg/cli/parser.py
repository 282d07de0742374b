"""Argument tree, global settings and dispatch for the matineq command line."""

from __future__ import annotations

import argparse
import logging
import sys

from core.errors import MatineqError
from core.orders import Tolerances
from core.quadrature import QuadratureRule, Scheme
from utils.config import config
from utils.helpers import parse_seed
from version import __version__

from cli import EXIT_ERROR, hunt_cmd, list_cmd, sweep_cmd, verify_cmd

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

COMMANDS = {
    "list": list_cmd,
    "verify": verify_cmd,
    "sweep": sweep_cmd,
    "hunt": hunt_cmd,
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 4, clear of "violated" (2)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _global_flags() -> argparse.ArgumentParser:
    # defaults stay None so the config file can fill the gaps
    flags = ArgumentParser(add_help=False)
    group = flags.add_argument_group("global options")
    group.add_argument("--panels", type=int, help="quadrature panels")
    group.add_argument("--scheme", choices=[s.value for s in Scheme], help="quadrature scheme")
    group.add_argument("--nodes-per-panel", type=int, help="Gauss nodes per panel")
    group.add_argument("--tol-abs", type=float, help="absolute tolerance")
    group.add_argument("--tol-rel", type=float, help="relative tolerance")
    group.add_argument("--out", help="write the JSON report here instead of stdout")
    group.add_argument("--seed", type=parse_seed, default=0, help="64-bit seed (default 0)")
    group.add_argument("--force", action="store_true",
                       help="evaluate even when hypotheses are unmet")
    group.add_argument("--no-timestamp", action="store_true",
                       help="omit the report timestamp")
    group.add_argument("--log-level", choices=LOG_LEVELS, help="logging level")
    group.add_argument("-v", "--verbose", action="store_true", help="same as --log-level DEBUG")
    return flags


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="matineq",
        description="Numerical verification of matrix Fejér and Levin-Stečkin inequalities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    parents = [_global_flags()]
    for module in COMMANDS.values():
        module.register(sub, parents)
    return parser


def log_level(args: argparse.Namespace) -> int:
    """--verbose > --log-level > config."""
    if getattr(args, "verbose", False):
        return logging.DEBUG
    name = getattr(args, "log_level", None) or str(config.get("log_level", "INFO"))
    return getattr(logging, name.upper(), logging.INFO)


def _pick(value, key: str):
    return value if value is not None else config.get(key)


def settings(args: argparse.Namespace) -> tuple[QuadratureRule, Tolerances]:
    """Quadrature rule and tolerances; CLI flag > config file > defaults."""
    rule = QuadratureRule(
        scheme=Scheme(_pick(args.scheme, "scheme")),
        panels=int(_pick(args.panels, "panels")),
        nodes_per_panel=int(_pick(args.nodes_per_panel, "nodes_per_panel")),
    )
    tols = Tolerances(float(_pick(args.tol_abs, "tol_abs")), float(_pick(args.tol_rel, "tol_rel")))
    return rule, tols


def dispatch(args: argparse.Namespace) -> int:
    try:
        rule, tols = settings(args)
    except (MatineqError, ValueError) as e:
        logger.error("Invalid settings: %s", e)
        return EXIT_ERROR
    logger.debug("rule=%s tolerances=%s", rule.to_dict(), tols.to_dict())
    try:
        return COMMANDS[args.command].handle(args, rule, tols)
    except MatineqError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


def run(argv: list[str] | None = None) -> int:
    """Parse and dispatch; logging is configured by the caller."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    return dispatch(args)
