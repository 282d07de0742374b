"""`verify`: run one checker on one instance, or replay a finding record."""

from __future__ import annotations

import argparse
import logging

from cli import EXIT_ERROR, VERDICT_EXIT
from core.checks import THEOREMS, CheckResult, TheoremKind
from core.errors import MatineqError
from core.generators import InstanceSpec, run_instance
from core.report import RunReport, load_finding, replay_finding
from utils.helpers import (
    format_result_line,
    format_slack_table,
    load_matrix_file,
    parse_interval,
)

logger = logging.getLogger(__name__)

DEFAULT_N = 2


def register(sub, parents) -> None:
    p = sub.add_parser("verify", parents=parents, help="check one instance")
    p.add_argument("--theorem", help="theorem id (see `list`)")
    p.add_argument("--f", help="function id")
    p.add_argument("--g", help="second function id (Chebyshev theorems)")
    p.add_argument("--p", help="weight id")
    p.add_argument("--a", type=float, default=0.0, help="left end for scalar-fejer/chebyshev")
    p.add_argument("--b", type=float, default=1.0, help="right end for scalar-fejer/chebyshev")
    p.add_argument("--A", dest="matrix_a", help="JSON file with matrix A")
    p.add_argument("--B", dest="matrix_b", help="JSON file with matrix B")
    p.add_argument("--n", type=int, help=f"size of seeded random matrices (default {DEFAULT_N})")
    p.add_argument("--interval", type=parse_interval, help="spectral interval lo,hi")
    p.add_argument("--alpha", type=float, default=1.0, help="Mond-Pecaric alpha")
    p.add_argument("--m", type=float, help="Mond-Pecaric lower spectral bound")
    p.add_argument("--M", dest="big_m", type=float, help="Mond-Pecaric upper spectral bound")
    p.add_argument("--mode", choices=["synchronous", "asynchronous"],
                   help="Chebyshev pairing (default: classified)")
    p.add_argument("--reverse", action="store_true", help="max-corrected refinement")
    p.add_argument("--record", help="replay a finding record")


def _spec_from_args(args: argparse.Namespace, n: int | None) -> InstanceSpec:
    return InstanceSpec(
        theorem_id=args.theorem,
        seed=args.seed,
        function_id=args.f,
        weight_id=args.p,
        g_id=args.g,
        n=n,
        interval=args.interval,
        a=args.a,
        b=args.b,
        alpha=args.alpha,
        m=args.m,
        big_m=args.big_m,
        mode=args.mode,
        reverse=args.reverse,
    )


def _verify(args: argparse.Namespace, rule, tols) -> CheckResult:
    if args.theorem not in THEOREMS:
        raise MatineqError(f"unknown or missing theorem id {args.theorem!r}")
    if not args.f:
        raise MatineqError("--f is required")
    matrices = None
    n = None
    if THEOREMS[args.theorem].kind is TheoremKind.MATRIX:
        if (args.matrix_a is None) != (args.matrix_b is None):
            raise MatineqError("--A and --B must be given together")
        if args.matrix_a is not None:
            matrices = (load_matrix_file(args.matrix_a), load_matrix_file(args.matrix_b))
            n = matrices[0].n
        else:
            n = args.n or DEFAULT_N
    return run_instance(_spec_from_args(args, n), rule, tols, args.force, matrices)


def handle(args: argparse.Namespace, rule, tols) -> int:
    try:
        if args.record:
            result, rule, tols = replay_finding(load_finding(args.record))
        else:
            result = _verify(args, rule, tols)
    except MatineqError as e:
        logger.error("%s", e)
        return EXIT_ERROR

    logger.info("%s", format_result_line(result))
    for verdict in result.verdicts:
        for line in format_slack_table(verdict):
            logger.debug("%s", line)

    report = RunReport("verify", rule, tols, [result])
    if args.no_timestamp:
        report.timestamp = None
    if args.record:
        report.extra["record"] = str(args.record)
    report.write(args.out)
    return VERDICT_EXIT[result.verdict]
