"""`hunt`: counterexample search with optional hypothesis perturbations."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from cli import EXIT_EXPECTATION_MISSED, EXIT_PASS
from core.generators import DrawOptions, Perturbation, hunt
from core.report import RunReport, write_finding
from utils.config import config
from utils.helpers import format_result_line, parse_id_list, parse_interval

logger = logging.getLogger(__name__)


def register(sub, parents) -> None:
    p = sub.add_parser("hunt", parents=parents, help="search for violations")
    p.add_argument("--theorem", required=True, help="theorem id")
    p.add_argument("--perturb", choices=[x.value for x in Perturbation], default="none",
                   help="hypothesis to drop")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--expect", choices=["violations", "none"],
                   help="expected outcome (default: violations when perturbed, else none)")
    p.add_argument("--findings-dir", help="directory for finding records")
    p.add_argument("--nmax", type=int, default=5, help="largest matrix size")
    p.add_argument("--interval", type=parse_interval, help="spectral interval lo,hi")
    p.add_argument("--f", help="restrict to these function ids (comma list)")
    p.add_argument("--p", help="restrict to these weight ids (comma list)")


def expectation(args: argparse.Namespace) -> str:
    if args.expect:
        return args.expect
    return "none" if args.perturb == Perturbation.NONE.value else "violations"


def handle(args: argparse.Namespace, rule, tols) -> int:
    perturbation = Perturbation(args.perturb)
    opts = DrawOptions(
        n_max=args.nmax,
        interval=args.interval,
        function_ids=parse_id_list(args.f),
        weight_ids=parse_id_list(args.p),
    )
    outcome = hunt(args.theorem, args.trials, args.seed, perturbation, opts, rule, tols,
                   config.threads)

    directory = Path(args.findings_dir or config.get("findings_dir", "findings"))
    paths = [str(write_finding(t, directory, rule, tols)) for t in outcome.findings]
    for trial in outcome.findings:
        logger.info("finding: %s", format_result_line(trial.result))

    expect = expectation(args)
    met = bool(paths) if expect == "violations" else not paths
    report = RunReport("hunt", rule, tols, [t.result for t in outcome.trials], extra={
        "seed": args.seed,
        "theorem": args.theorem,
        "perturbation": perturbation.value,
        "expect": expect,
        "expectation_met": met,
        "findings": paths,
    })
    if args.no_timestamp:
        report.timestamp = None
    report.write(args.out)

    if not met:
        logger.warning("hunt %s/%s: expected %s, got %d findings",
                       args.theorem, perturbation.value, expect, len(paths))
        return EXIT_EXPECTATION_MISSED
    return EXIT_PASS
