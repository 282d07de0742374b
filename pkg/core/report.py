"""JSON run reports and persisted counterexample records."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from core.checks import CheckResult, Verdict
from core.errors import MalformedMatrixFileError, MalformedRecordError
from core.generators import InstanceSpec, Trial, instance_matrices, run_instance
from core.linalg import matrix_from_record, matrix_to_record
from core.orders import Tolerances
from core.quadrature import QuadratureRule
from version import __version__

logger = logging.getLogger(__name__)

REPORT_KIND = "matineq-report"
FINDING_KIND = "matineq-finding"


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunReport:
    command: str
    rule: QuadratureRule
    tolerances: Tolerances
    results: list[CheckResult] = field(default_factory=list)
    timestamp: str | None = field(default_factory=now_iso)
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for result in self.results:
            counts[result.verdict.value] += 1
        counts["total"] = len(self.results)
        return counts

    def to_dict(self) -> dict:
        d = {
            "kind": REPORT_KIND,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "command": self.command,
            "rule": self.rule.to_dict(),
            "tolerances": self.tolerances.to_dict(),
            "summary": self.summary(),
            "results": [r.to_dict() for r in self.results],
        }
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write(self, path: Path | None) -> None:
        """Write to ``path``, or stdout when no path is given."""
        text = self.to_json()
        if path is None:
            print(text)
            return
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info("Report written to %s", path)


# ── Findings ───────────────────────────────────────────────────────────────

def finding_record(trial: Trial, rule: QuadratureRule, tols: Tolerances,
                   matrices=None) -> dict:
    pair = matrices if matrices is not None else instance_matrices(trial.spec)
    return {
        "kind": FINDING_KIND,
        "tool_version": __version__,
        "spec": trial.spec.to_dict(),
        "matrices": None if pair is None else {
            "A": matrix_to_record(pair[0]),
            "B": matrix_to_record(pair[1]),
        },
        "rule": rule.to_dict(),
        "tolerances": tols.to_dict(),
        "result": trial.result.to_dict(),
    }


def finding_filename(spec: InstanceSpec) -> str:
    return f"{spec.theorem_id}-{spec.perturbation.value}-{spec.seed:016x}.json"


def write_finding(trial: Trial, directory: Path, rule: QuadratureRule,
                  tols: Tolerances) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / finding_filename(trial.spec)
    path.write_text(json.dumps(finding_record(trial, rule, tols), indent=2) + "\n",
                    encoding="utf-8")
    logger.info("Finding written to %s", path)
    return path


def load_finding(path: Path) -> dict:
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedRecordError(f"cannot read finding {path}: {e}") from e
    if not isinstance(record, dict) or record.get("kind") != FINDING_KIND:
        raise MalformedRecordError(f"{path} is not a finding record")
    for key in ("spec", "rule", "tolerances", "result"):
        if key not in record:
            raise MalformedRecordError(f"finding {path} lacks '{key}'")
    return record


def replay_finding(record: dict) -> tuple[CheckResult, QuadratureRule, Tolerances]:
    """Re-run a finding with its recorded rule, tolerances and matrices."""
    try:
        spec = InstanceSpec.from_dict(record["spec"])
        rule = QuadratureRule.from_dict(record["rule"])
        tols = Tolerances(**record["tolerances"])
        matrices = record.get("matrices")
        pair = None
        if matrices:
            pair = (matrix_from_record(matrices["A"]), matrix_from_record(matrices["B"]))
        forced = bool(record["result"].get("forced", False))
    except (KeyError, TypeError, ValueError, MalformedMatrixFileError) as e:
        raise MalformedRecordError(f"bad finding record: {e}") from e
    return run_instance(spec, rule, tols, forced, pair), rule, tols
