"""`sweep`: random admissible instances across the registry."""

from __future__ import annotations

import argparse
import logging

from cli import EXIT_ERROR, EXIT_PASS, EXIT_VIOLATED
from core.checks import THEOREMS, theorem_ids
from core.errors import UnknownIdError
from core.generators import DrawOptions, sweep
from core.report import RunReport
from utils.config import config
from utils.helpers import format_result_line, parse_id_list, parse_interval

logger = logging.getLogger(__name__)


def register(sub, parents) -> None:
    p = sub.add_parser("sweep", parents=parents, help="property sweep over random instances")
    p.add_argument("--theorem", default="all", help="theorem id, comma list or 'all'")
    p.add_argument("--trials", type=int, default=50, help="instances per theorem")
    p.add_argument("--nmax", type=int, default=5, help="largest matrix size")
    p.add_argument("--interval", type=parse_interval, help="spectral interval lo,hi")
    p.add_argument("--f", help="restrict to these function ids (comma list)")
    p.add_argument("--p", help="restrict to these weight ids (comma list)")


def selected_theorems(text: str) -> list[str]:
    if text == "all":
        return theorem_ids()
    ids = list(parse_id_list(text))
    for tid in ids:
        if tid not in THEOREMS:
            raise UnknownIdError(f"unknown theorem id {tid!r}")
    return ids


def handle(args: argparse.Namespace, rule, tols) -> int:
    ids = selected_theorems(args.theorem)
    opts = DrawOptions(
        n_max=args.nmax,
        interval=args.interval,
        function_ids=parse_id_list(args.f),
        weight_ids=parse_id_list(args.p),
    )
    trials = sweep(ids, args.trials, args.seed, opts, rule, tols, args.force, config.threads)
    results = [t.result for t in trials]

    report = RunReport("sweep", rule, tols, results, extra={
        "seed": args.seed, "trials": args.trials, "theorems": ids,
    })
    if args.no_timestamp:
        report.timestamp = None
    summary = report.summary()
    for result in results:
        logger.debug("%s", format_result_line(result))
    logger.info("sweep summary: %s", summary)
    report.write(args.out)

    if summary["violated"]:
        return EXIT_VIOLATED
    if summary["error"]:
        return EXIT_ERROR
    return EXIT_PASS
