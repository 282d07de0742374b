"""Command-line surface: list, verify, sweep and hunt."""

from core.checks import Verdict

EXIT_PASS = 0
EXIT_EXPECTATION_MISSED = 1
EXIT_VIOLATED = 2
EXIT_HYPOTHESIS_UNMET = 3
EXIT_ERROR = 4

VERDICT_EXIT = {
    Verdict.PASS: EXIT_PASS,
    Verdict.VIOLATED: EXIT_VIOLATED,
    Verdict.HYPOTHESIS_UNMET: EXIT_HYPOTHESIS_UNMET,
    Verdict.ERROR: EXIT_ERROR,
}
