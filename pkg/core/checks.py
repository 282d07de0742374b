"""One checker per inequality.

Each checker validates the hypotheses of its inequality, evaluates both sides
with one shared quadrature rule and returns a CheckResult carrying margins.
Numerical failures become ``error`` verdicts instead of exceptions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from core.errors import (
    DegenerateIntervalError,
    DomainMismatchError,
    MatineqError,
    NotPositiveDefiniteError,
    ParameterOutOfRangeError,
    UnknownIdError,
)
from core.funcspace import (
    DEGENERATE_WIDTH,
    ScalarFunction,
    Synchrony,
    WeightFunction,
    beta_argmax,
    check_convex_sampled,
    check_log_convex_sampled,
    check_monotone_sampled,
    check_positive_sampled,
    check_synchronous,
    secant_coeffs,
)
from core.linalg import (
    POSITIVITY_FLOOR,
    UNIT_INTERVAL,
    HermitianMatrix,
    Interval,
    apply_function,
    convex_path,
    eigenvalues,
    matrix_log,
    spectral_hull,
)
from core.orders import (
    DEFAULT_TOLERANCES,
    Tolerances,
    eigen_leq,
    loewner_leq,
    weak_majorize,
    weak_majorize_vectors,
)
from core.quadrature import (
    DEFAULT_RULE,
    QuadratureRule,
    integrate_matrix,
    integrate_scalar,
    normalize_weight,
    weight_total,
)

logger = logging.getLogger(__name__)

ENCLOSURE_SLACK = 1e-10
HALF_INTERVAL = Interval(0.0, 0.5)

# Kink crossings of the matrix path: anchors where (1-t)A + tB - kI is tried
# for invertibility, and the tolerances that accept a pencil root as real.
KINK_ANCHORS = (0.5, 0.37, 0.61, 0.23, 0.79)
KINK_ANCHOR_GAP = 1e-8
KINK_IMAG_TOL = 1e-9

# hypothesis flags a perturbation may waive
CONVEXITY_FLAGS = frozenset({"convex", "operator_convex", "log_convex"})


# ── Result types ───────────────────────────────────────────────────────────

class Verdict(str, Enum):
    PASS = "pass"
    VIOLATED = "violated"
    HYPOTHESIS_UNMET = "hypothesis-unmet"
    ERROR = "error"


@dataclass(frozen=True)
class ScalarSlack:
    """lhs <= rhs, certified up to tolerance; slack = rhs - lhs."""

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    scale: float = 1.0

    @property
    def margin(self) -> float:
        return self.slack

    def to_dict(self) -> dict:
        return {
            "kind": "scalar",
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "margin": self.slack,
            "holds": self.holds,
            "scale": self.scale,
        }


def scalar_slack(name: str, lhs: float, rhs: float,
                 tols: Tolerances = DEFAULT_TOLERANCES) -> ScalarSlack:
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    scale = max(1.0, abs(lhs), abs(rhs))
    return ScalarSlack(name, lhs, rhs, slack, slack >= -tols.allowance(scale), scale)


@dataclass(frozen=True)
class Hypothesis:
    flag: str
    description: str
    satisfied: bool
    waived: bool = False

    def to_dict(self) -> dict:
        return {
            "flag": self.flag,
            "description": self.description,
            "satisfied": self.satisfied,
            "waived": self.waived,
        }


@dataclass
class CheckResult:
    theorem_id: str
    instance: dict
    verdict: Verdict
    verdicts: list = field(default_factory=list)
    margin: float | None = None
    hypotheses: list[Hypothesis] = field(default_factory=list)
    quantities: dict = field(default_factory=dict)
    tolerances: Tolerances = DEFAULT_TOLERANCES
    error: str | None = None
    forced: bool = False
    waived: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "instance": dict(self.instance),
            "verdict": self.verdict.value,
            "margin": self.margin,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "quantities": _jsonable(self.quantities),
            "tolerances": self.tolerances.to_dict(),
            "error": self.error,
            "forced": self.forced,
            "waived": list(self.waived),
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


# ── Shared machinery ───────────────────────────────────────────────────────

Evaluation = tuple[list, dict]


def _run_check(
    theorem_id: str,
    instance: dict,
    hypotheses: Callable[[], list[Hypothesis]],
    evaluate: Callable[[], Evaluation],
    tols: Tolerances,
    force: bool,
    waive: frozenset[str],
) -> CheckResult:
    base = {
        "theorem_id": theorem_id,
        "instance": instance,
        "tolerances": tols,
        "forced": force,
        "waived": tuple(sorted(waive)),
    }
    try:
        hyps = [
            replace(h, waived=not h.satisfied and (force or h.flag in waive))
            for h in hypotheses()
        ]
        base["hypotheses"] = hyps
        blocking = [h.flag for h in hyps if not h.satisfied and not h.waived]
        if blocking:
            logger.info("%s: hypothesis unmet (%s)", theorem_id, ", ".join(blocking))
            return CheckResult(verdict=Verdict.HYPOTHESIS_UNMET, **base)
        verdicts, quantities = evaluate()
    except MatineqError as e:
        logger.warning("%s: evaluation failed: %s", theorem_id, e)
        return CheckResult(verdict=Verdict.ERROR, error=f"{type(e).__name__}: {e}", **base)

    margin = min(v.margin for v in verdicts)
    if any(not v.holds for v in verdicts):
        verdict = Verdict.VIOLATED
    elif any(not h.satisfied for h in base["hypotheses"]):
        verdict = Verdict.HYPOTHESIS_UNMET
    else:
        verdict = Verdict.PASS
    logger.info("%s: %s (margin %.3e)", theorem_id, verdict.value, margin)
    return CheckResult(verdict=verdict, verdicts=verdicts, margin=margin,
                       quantities=quantities, **base)


def _instance(rule: QuadratureRule, **fields) -> dict:
    d = {k: v for k, v in fields.items() if v is not None}
    d["rule"] = rule.to_dict()
    return d


def _function_has(f: ScalarFunction, flag: str, interval: Interval | None) -> bool:
    """Declared flag, falling back to a sampled check on a finite interval."""
    if getattr(f.flags, flag):
        return True
    if interval is None or not interval.is_finite or not f.domain.contains_interval(interval):
        return False
    if flag == "convex":
        return check_convex_sampled(f, interval).passed
    if flag == "positive":
        return check_positive_sampled(f, interval)
    if flag == "log_convex":
        return check_positive_sampled(f, interval) and check_log_convex_sampled(f, interval).passed
    return False


def _is_monotone(f: ScalarFunction, interval: Interval) -> bool:
    if f.flags.monotone_increasing or f.flags.monotone_decreasing:
        return True
    if not interval.is_finite or not f.domain.contains_interval(interval):
        return False
    return any(check_monotone_sampled(f, interval))


def _span(interval: Interval) -> str:
    return f"[{interval.lo:.6g}, {interval.hi:.6g}]"


def _f_hyp(f: ScalarFunction, flag: str, interval: Interval | None) -> Hypothesis:
    where = f" on {_span(interval)}" if interval is not None else ""
    return Hypothesis(flag, f"{f.id} is {flag.replace('_', '-')}{where}",
                      _function_has(f, flag, interval))


def _monotone_hyp(f: ScalarFunction, interval: Interval) -> Hypothesis:
    return Hypothesis("monotone", f"{f.id} is monotone on {_span(interval)}",
                      _is_monotone(f, interval))


def _differentiable_hyp(f: ScalarFunction) -> Hypothesis:
    return Hypothesis("differentiable", f"{f.id} has an analytic derivative",
                      f.flags.differentiable)


_WEIGHT_FLAGS = {
    "symmetric": ("symmetric", "p(t) = p(1 - t)"),
    "nonnegative": ("nonnegative", "p >= 0"),
    "nondecreasing": ("nondecreasing_first_half", "p non-decreasing on [0, 1/2]"),
    "strictly_positive": ("strictly_positive", "p > 0 on (0, 1)"),
}


def _weight_hyps(p: WeightFunction, *flags: str) -> list[Hypothesis]:
    hyps = []
    for flag in flags:
        attr, text = _WEIGHT_FLAGS[flag]
        hyps.append(Hypothesis(flag, f"{p.id}: {text}", getattr(p.flags, attr)))
    return hyps


def _require_domain(f: ScalarFunction, interval: Interval) -> None:
    if not f.domain.contains_interval(interval):
        raise DomainMismatchError(
            f"{_span(interval)} is not inside the domain of {f.id} {_span(f.domain)}"
        )


def _unit_breakpoints(p: WeightFunction | None, *fs: ScalarFunction,
                      mirrored: bool = False) -> tuple[float, ...]:
    points = set(p.breakpoints) if p is not None else set()
    for f in fs:
        points.update(k for k in f.kinks if 0.0 < k < 1.0)
        if mirrored:
            points.update(1.0 - k for k in f.kinks if 0.0 < k < 1.0)
    return tuple(sorted(points))


class _Path:
    """Memoized t -> f((1-t)A + tB), shared by both sides of a check."""

    def __init__(self, f: ScalarFunction, a: HermitianMatrix, b: HermitianMatrix) -> None:
        self.f = f
        self.a = a
        self.b = b
        self._at = lru_cache(maxsize=None)(self._evaluate)

    def _evaluate(self, t: float) -> HermitianMatrix:
        return apply_function(self.f, convex_path(self.a, self.b, t))

    def __call__(self, t: float) -> HermitianMatrix:
        return self._at(t)

    def weighted(self, p: WeightFunction) -> Callable[[float], HermitianMatrix]:
        return lambda t: float(p.eval(t)) * self._at(t)

    def kink_crossings(self) -> tuple[float, ...]:
        """Parameters t in (0, 1) where an eigenvalue of the path meets a kink of f.

        det((1-t)A + tB - kI) = 0 is a linear pencil in t. Around an
        invertible anchor C0 = path(t0) - kI the roots are t = t0 - 1/mu for
        the real nonzero eigenvalues mu of C0^{-1} (B - A).
        """
        diff = self.b.entries - self.a.entries
        if not self.f.kinks or not np.any(diff):
            return ()
        eye = np.eye(self.a.n)
        crossings: set[float] = set()
        for kink in self.f.kinks:
            anchor = None
            for t0 in KINK_ANCHORS:
                c0 = convex_path(self.a, self.b, t0).entries - kink * eye
                if np.min(np.abs(np.linalg.eigvalsh(c0))) > KINK_ANCHOR_GAP:
                    anchor = (t0, c0)
                    break
            if anchor is None:
                logger.debug("No invertible anchor for kink %s of %s", kink, self.f.id)
                continue
            t0, c0 = anchor
            for mu in np.linalg.eigvals(np.linalg.solve(c0, diff)):
                if abs(mu) <= KINK_IMAG_TOL or abs(mu.imag) > KINK_IMAG_TOL * (1.0 + abs(mu)):
                    continue
                t = t0 - 1.0 / mu.real
                if 0.0 < t < 1.0:
                    crossings.add(float(t))
        return tuple(sorted(crossings))

    def breakpoints(self, p: WeightFunction) -> tuple[float, ...]:
        """Panel edges for integrating this path against p."""
        return tuple(sorted(set(p.breakpoints) | set(self.kink_crossings())))

    def midpoint(self) -> HermitianMatrix:
        return apply_function(self.f, convex_path(self.a, self.b, 0.5))


# ── Scalar inequalities on [0, 1] ──────────────────────────────────────────

def check_scalar_levin_steckin(
    f: ScalarFunction,
    p: WeightFunction,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """int p f <= int p * int f for convex f and symmetric p non-decreasing on [0, 1/2]."""

    def hypotheses():
        return [_f_hyp(f, "convex", UNIT_INTERVAL),
                *_weight_hyps(p, "symmetric", "nondecreasing")]

    def evaluate():
        _require_domain(f, UNIT_INTERVAL)
        bp = _unit_breakpoints(p, f)
        int_p = integrate_scalar(p.eval, UNIT_INTERVAL, rule, bp)
        int_f = integrate_scalar(f.eval, UNIT_INTERVAL, rule, bp)
        int_pf = integrate_scalar(lambda t: p.eval(t) * f.eval(t), UNIT_INTERVAL, rule, bp)
        return (
            [scalar_slack("levin-steckin", int_pf, int_p * int_f, tols)],
            {"int_p": int_p, "int_f": int_f, "int_pf": int_pf},
        )

    return _run_check("scalar-levin-steckin", _instance(rule, f=f.id, p=p.id),
                      hypotheses, evaluate, tols, force, waive)


def check_scalar_fejer(
    f: ScalarFunction,
    p: WeightFunction,
    a: float,
    b: float,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """Both Fejer bounds around int p(t) f((1-t)a + tb) dt."""

    def hypotheses():
        interval = Interval(a, b)
        return [_f_hyp(f, "convex", interval),
                *_weight_hyps(p, "symmetric", "nonnegative")]

    def evaluate():
        interval = Interval(a, b)
        _require_domain(f, interval)
        bp = set(p.breakpoints)
        if b > a:
            bp.update((k - a) / (b - a) for k in f.kinks if a < k < b)
        bp = tuple(sorted(bp))
        total = integrate_scalar(p.eval, UNIT_INTERVAL, rule, bp)
        lower = total * float(f.eval(0.5 * (a + b)))
        middle = integrate_scalar(
            lambda t: p.eval(t) * f.eval((1.0 - t) * a + t * b), UNIT_INTERVAL, rule, bp
        )
        upper = total * 0.5 * (float(f.eval(a)) + float(f.eval(b)))
        return (
            [scalar_slack("lower", lower, middle, tols),
             scalar_slack("upper", middle, upper, tols)],
            {"weight_total": total, "chain": [lower, middle, upper]},
        )

    return _run_check("scalar-fejer", _instance(rule, f=f.id, p=p.id, a=a, b=b),
                      hypotheses, evaluate, tols, force, waive)


def _derivative_integrals(f: ScalarFunction, p: WeightFunction, rule: QuadratureRule) -> dict:
    bp = _unit_breakpoints(p, f)

    def q(g):
        return integrate_scalar(g, UNIT_INTERVAL, rule, bp)

    return {
        "int_p": q(p.eval),
        "int_f": q(f.eval),
        "int_pf": q(lambda t: p.eval(t) * f.eval(t)),
        "int_df": q(f.deriv),
        "int_tp": q(lambda t: t * p.eval(t)),
        "int_tdf": q(lambda t: t * f.deriv(t)),
        "int_pdf": q(lambda t: p.eval(t) * f.deriv(t)),
        "int_ptdf": q(lambda t: p.eval(t) * t * f.deriv(t)),
    }


def check_general_levin_steckin(
    f: ScalarFunction,
    p: WeightFunction,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """First-order bounds on int p f for convex differentiable f and any p >= 0."""

    def hypotheses():
        return [_f_hyp(f, "convex", UNIT_INTERVAL), _differentiable_hyp(f),
                *_weight_hyps(p, "nonnegative")]

    def evaluate():
        _require_domain(f, UNIT_INTERVAL)
        q = _derivative_integrals(f, p, rule)
        first = q["int_f"] * q["int_p"] + (q["int_df"] * q["int_tp"] - q["int_tdf"] * q["int_p"])
        second = q["int_pf"] + 0.5 * q["int_pdf"] - q["int_ptdf"]
        return (
            [scalar_slack("first", first, q["int_pf"], tols),
             scalar_slack("second", second, q["int_p"] * q["int_f"], tols)],
            q,
        )

    return _run_check("general-levin-steckin", _instance(rule, f=f.id, p=p.id),
                      hypotheses, evaluate, tols, force, waive)


def check_moment_corollary(
    f: ScalarFunction,
    p: WeightFunction,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """int f' * int t p <= int t f' * int p."""

    def hypotheses():
        return [_f_hyp(f, "convex", UNIT_INTERVAL), _differentiable_hyp(f),
                *_weight_hyps(p, "symmetric", "nondecreasing")]

    def evaluate():
        _require_domain(f, UNIT_INTERVAL)
        q = _derivative_integrals(f, p, rule)
        return (
            [scalar_slack("moment", q["int_df"] * q["int_tp"], q["int_tdf"] * q["int_p"], tols)],
            {k: q[k] for k in ("int_p", "int_tp", "int_df", "int_tdf")},
        )

    return _run_check("moment-corollary", _instance(rule, f=f.id, p=p.id),
                      hypotheses, evaluate, tols, force, waive)


def check_levin_steckin_refined(
    f: ScalarFunction,
    p: WeightFunction,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
    reverse: bool = False,
) -> CheckResult:
    """Levin-Steckin with a correction term.

    The correction is min (or max when ``reverse``) of the weight bracket
    2 int_0^1/2 p^2 - (int p)^2 and the function bracket
    1/2 int_0^1/2 (f(t) + f(1-t))^2 - (1/2 int_0^1 (f(t) + f(1-t)))^2.
    Default form: int p f <= int p int f - min. Reverse form:
    int p f >= int p int f - max.
    """

    def hypotheses():
        return [_f_hyp(f, "convex", UNIT_INTERVAL),
                *_weight_hyps(p, "symmetric", "nondecreasing")]

    def evaluate():
        _require_domain(f, UNIT_INTERVAL)
        bp = _unit_breakpoints(p, f, mirrored=True)
        int_p = integrate_scalar(p.eval, UNIT_INTERVAL, rule, bp)
        int_f = integrate_scalar(f.eval, UNIT_INTERVAL, rule, bp)
        int_pf = integrate_scalar(lambda t: p.eval(t) * f.eval(t), UNIT_INTERVAL, rule, bp)

        def fold(t):
            return f.eval(t) + f.eval(1.0 - t)

        half_bp = tuple(x for x in bp if x < 0.5)
        p_sq_half = integrate_scalar(lambda t: p.eval(t) ** 2, HALF_INTERVAL, rule, half_bp)
        fold_sq_half = integrate_scalar(lambda t: fold(t) ** 2, HALF_INTERVAL, rule, half_bp)
        fold_total = integrate_scalar(fold, UNIT_INTERVAL, rule, bp)
        bracket_p = 2.0 * p_sq_half - int_p ** 2
        bracket_f = 0.5 * fold_sq_half - (0.5 * fold_total) ** 2

        if reverse:
            correction = max(bracket_p, bracket_f)
            slack = scalar_slack("refined-reverse", int_p * int_f - correction, int_pf, tols)
        else:
            correction = min(bracket_p, bracket_f)
            slack = scalar_slack("refined", int_pf, int_p * int_f - correction, tols)
        return (
            [slack],
            {
                "int_p": int_p, "int_f": int_f, "int_pf": int_pf,
                "bracket_p": bracket_p, "bracket_f": bracket_f,
                "correction": correction, "reverse": reverse,
            },
        )

    return _run_check(
        "levin-steckin-refined",
        _instance(rule, f=f.id, p=p.id, reverse=reverse or None),
        hypotheses, evaluate, tols, force, waive,
    )


# ── Synchronous pairs ──────────────────────────────────────────────────────

def _moments(f: ScalarFunction, g: ScalarFunction, interval: Interval,
             rule: QuadratureRule) -> dict:
    """Means, variances and the mean of fg over ``interval``."""
    if interval.width <= DEGENERATE_WIDTH:
        raise DegenerateIntervalError(f"degenerate interval {_span(interval)}")
    _require_domain(f, interval)
    _require_domain(g, interval)
    bp = tuple(sorted({k for k in f.kinks + g.kinks if interval.lo < k < interval.hi}))
    width = interval.width

    def mean(h):
        return integrate_scalar(h, interval, rule, bp) / width

    mf, mg = mean(f.eval), mean(g.eval)
    mff = mean(lambda x: f.eval(x) ** 2)
    mgg = mean(lambda x: g.eval(x) ** 2)
    mfg = mean(lambda x: f.eval(x) * g.eval(x))
    return {
        "mean_f": mf, "mean_g": mg, "mean_fg": mfg,
        "var_f": mff - mf * mf, "var_g": mgg - mg * mg,
        "covariance": mfg - mf * mg,
    }


def check_chebyshev_variance(
    f: ScalarFunction,
    g: ScalarFunction,
    a: float,
    b: float,
    mode: str | None = None,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """min{Var f, Var g} <= |covariance| <= max{Var f, Var g}.

    ``mode`` is "synchronous" or "asynchronous"; when omitted it is taken
    from the sampled classification of (f, g) on [a, b].
    """
    state: dict = {}

    def hypotheses():
        interval = Interval(a, b)
        report = check_synchronous(f, g, interval)
        wanted = Synchrony(mode) if mode is not None else (
            report.kind if report.kind is not Synchrony.NEITHER else Synchrony.SYNCHRONOUS
        )
        state.update(interval=interval, report=report, mode=wanted)
        return [Hypothesis(
            "synchronous",
            f"{f.id}, {g.id} {wanted.value} on {_span(interval)} "
            f"(sampled: {report.kind.value})",
            report.kind is wanted,
        )]

    def evaluate():
        q = _moments(f, g, state["interval"], rule)
        report = state["report"]
        synchronous = state["mode"] is Synchrony.SYNCHRONOUS
        middle = q["covariance"] if synchronous else -q["covariance"]
        lo, hi = min(q["var_f"], q["var_g"]), max(q["var_f"], q["var_g"])
        q.update(middle=middle, mode=state["mode"].value, classification=report.kind.value)
        if report.negative_witness is not None:
            q.update(negative_witness=list(report.negative_witness),
                     positive_witness=list(report.positive_witness))
        return (
            [scalar_slack("lower", lo, middle, tols), scalar_slack("upper", middle, hi, tols)],
            q,
        )

    return _run_check(
        "chebyshev-variance", _instance(rule, f=f.id, g=g.id, a=a, b=b, mode=mode),
        hypotheses, evaluate, tols, force, waive,
    )


def check_chebyshev_am_bound(
    f: ScalarFunction,
    g: ScalarFunction,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """int fg - int f int g <= (Var f + Var g) / 2 on [0, 1]."""

    def hypotheses():
        report = check_synchronous(f, g, UNIT_INTERVAL)
        return [Hypothesis("synchronous", f"{f.id}, {g.id} synchronous on [0, 1] "
                           f"(sampled: {report.kind.value})",
                           report.kind is Synchrony.SYNCHRONOUS)]

    def evaluate():
        q = _moments(f, g, UNIT_INTERVAL, rule)
        bound = 0.5 * (q["var_f"] + q["var_g"])
        q["bound"] = bound
        return [scalar_slack("am", q["covariance"], bound, tols)], q

    return _run_check("chebyshev-am-bound", _instance(rule, f=f.id, g=g.id),
                      hypotheses, evaluate, tols, force, waive)


# ── Matrix inequalities along (1-t)A + tB ──────────────────────────────────

def _matrix_instance(rule, f, p, a, b, **extra) -> dict:
    return _instance(rule, f=f.id, p=p.id, n=a.n, **extra)


def check_matrix_fejer_lower(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """int p * f((A+B)/2) is weakly majorized by int p(t) f((1-t)A + tB) dt."""
    state: dict = {}

    def hypotheses():
        state["hull"] = spectral_hull(a, b)
        return [_f_hyp(f, "convex", state["hull"]),
                *_weight_hyps(p, "symmetric", "nonnegative")]

    def evaluate():
        path = _Path(f, a, b)
        total = weight_total(p, rule)
        lhs = total * path.midpoint()
        rhs = integrate_matrix(path.weighted(p), UNIT_INTERVAL, rule, path.breakpoints(p))
        verdict = weak_majorize(lhs, rhs, tols.tol_abs, tols.tol_rel)
        return [verdict], {
            "weight_total": total,
            "spectral_interval": state["hull"].to_list(),
            "lhs_eigenvalues": verdict.extra["lhs"],
            "rhs_eigenvalues": verdict.extra["rhs"],
        }

    return _run_check("matrix-fejer-lower", _matrix_instance(rule, f, p, a, b),
                      hypotheses, evaluate, tols, force, waive)


def check_matrix_fejer_upper(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """lambda(int p f(path)) <= lambda(int p * (f(A) + f(B))/2) for monotone convex f."""
    state: dict = {}

    def hypotheses():
        hull = spectral_hull(a, b)
        state["hull"] = hull
        return [_f_hyp(f, "convex", hull), _monotone_hyp(f, hull),
                *_weight_hyps(p, "symmetric", "nonnegative")]

    def evaluate():
        path = _Path(f, a, b)
        total = weight_total(p, rule)
        lhs = integrate_matrix(path.weighted(p), UNIT_INTERVAL, rule, path.breakpoints(p))
        rhs = (apply_function(f, a) + apply_function(f, b)) * (0.5 * total)
        verdict = eigen_leq(lhs, rhs, tols.tol_abs, tols.tol_rel)
        return [verdict], {
            "weight_total": total,
            "spectral_interval": state["hull"].to_list(),
            "lhs_eigenvalues": verdict.extra["lhs"],
            "rhs_eigenvalues": verdict.extra["rhs"],
        }

    return _run_check("matrix-fejer-upper", _matrix_instance(rule, f, p, a, b),
                      hypotheses, evaluate, tols, force, waive)


def _log_fejer_hypotheses(f, p, a, b, state) -> list[Hypothesis]:
    hull = spectral_hull(a, b)
    state["hull"] = hull
    return [_f_hyp(f, "log_convex", hull), _f_hyp(f, "positive", hull),
            *_weight_hyps(p, "strictly_positive", "symmetric")]


def _log_fejer_sides(f, p, a, b, rule) -> tuple[HermitianMatrix, HermitianMatrix, float]:
    total = weight_total(p, rule)
    normalized = normalize_weight(p, rule)
    path = _Path(f, a, b)
    rhs = integrate_matrix(path.weighted(normalized), UNIT_INTERVAL, rule, path.breakpoints(p))
    return path.midpoint(), rhs, total


def check_log_fejer(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """log f((A+B)/2) is weakly majorized by log int p f(path), p normalized."""
    state: dict = {}

    def evaluate():
        mid, integral, total = _log_fejer_sides(f, p, a, b, rule)
        lhs, rhs = matrix_log(mid), matrix_log(integral)
        verdict = weak_majorize(lhs, rhs, tols.tol_abs, tols.tol_rel)
        return [verdict], {
            "weight_total": total,
            "spectral_interval": state["hull"].to_list(),
            "lhs_eigenvalues": verdict.extra["lhs"],
            "rhs_eigenvalues": verdict.extra["rhs"],
        }

    return _run_check("log-fejer", _matrix_instance(rule, f, p, a, b),
                      lambda: _log_fejer_hypotheses(f, p, a, b, state),
                      evaluate, tols, force, waive)


def check_eig_product_fejer(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """Top-k eigenvalue products of f((A+B)/2) never exceed those of int p f(path)."""
    state: dict = {}

    def evaluate():
        mid, integral, total = _log_fejer_sides(f, p, a, b, rule)
        la, lb = eigenvalues(mid), eigenvalues(integral)
        for lam in (la, lb):
            if lam[-1] <= POSITIVITY_FLOOR:
                raise NotPositiveDefiniteError(float(lam[-1]))
        verdict = weak_majorize_vectors(np.log(la), np.log(lb), tols.tol_abs, tols.tol_rel)
        return [verdict], {
            "weight_total": total,
            "spectral_interval": state["hull"].to_list(),
            "lhs_products": [float(x) for x in np.cumprod(la)],
            "rhs_products": [float(x) for x in np.cumprod(lb)],
        }

    return _run_check("eig-product-fejer", _matrix_instance(rule, f, p, a, b),
                      lambda: _log_fejer_hypotheses(f, p, a, b, state),
                      evaluate, tols, force, waive)


def check_operator_levin_steckin(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
) -> CheckResult:
    """int p f(path) <= int p * int f(path) in the Loewner order."""

    def hypotheses():
        return [_f_hyp(f, "operator_convex", None),
                *_weight_hyps(p, "symmetric", "nondecreasing")]

    def evaluate():
        path = _Path(f, a, b)
        total = weight_total(p, rule)
        edges = path.breakpoints(p)
        lhs = integrate_matrix(path.weighted(p), UNIT_INTERVAL, rule, edges)
        plain = integrate_matrix(path, UNIT_INTERVAL, rule, edges)
        verdict = loewner_leq(lhs, total * plain, tols.tol_abs, tols.tol_rel)
        return [verdict], {"weight_total": total}

    return _run_check("operator-levin-steckin", _matrix_instance(rule, f, p, a, b),
                      hypotheses, evaluate, tols, force, waive)


def check_mond_pecaric_reverse(
    f: ScalarFunction,
    p: WeightFunction,
    a: HermitianMatrix,
    b: HermitianMatrix,
    alpha: float,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive: frozenset[str] = frozenset(),
    m: float | None = None,
    big_m: float | None = None,
) -> CheckResult:
    """int p * int f(path) <= beta int p I + alpha int p f(path).

    [m, M] defaults to the smallest interval holding both spectra; explicit
    bounds replace either end and must still enclose the spectra.
    """
    state: dict = {}

    def hypotheses():
        if not alpha >= 0:
            raise ParameterOutOfRangeError(f"alpha must be >= 0, got {alpha!r}")
        hull = spectral_hull(a, b)
        interval = Interval(hull.lo if m is None else m, hull.hi if big_m is None else big_m)
        state.update(hull=hull, interval=interval,
                     source="spectral-hull" if m is None and big_m is None else "override")
        return [
            Hypothesis("enclosing", f"{_span(interval)} holds both spectra {_span(hull)}",
                       interval.contains_interval(hull, ENCLOSURE_SLACK)),
            _f_hyp(f, "convex", interval),
            *_weight_hyps(p, "symmetric", "nonnegative"),
        ]

    def evaluate():
        interval = state["interval"]
        q: dict = {"alpha": alpha, "interval": interval.to_list(),
                   "interval_source": state["source"]}
        if interval.width <= DEGENERATE_WIDTH:
            _require_domain(f, interval)
            beta = (1.0 - alpha) * float(f.eval(interval.lo))
            q.update(beta=beta, beta_argmax=interval.lo, a_f=None, b_f=None)
        else:
            coeffs = secant_coeffs(f, interval.lo, interval.hi)
            x_star, beta = beta_argmax(f, interval.lo, interval.hi, alpha)
            q.update(beta=beta, beta_argmax=x_star, a_f=coeffs.a_f, b_f=coeffs.b_f)

        path = _Path(f, a, b)
        total = weight_total(p, rule)
        edges = path.breakpoints(p)
        plain = integrate_matrix(path, UNIT_INTERVAL, rule, edges)
        weighted = integrate_matrix(path.weighted(p), UNIT_INTERVAL, rule, edges)
        lhs = total * plain
        rhs = HermitianMatrix.identity(a.n) * (beta * total) + weighted * alpha
        q["weight_total"] = total
        return [loewner_leq(lhs, rhs, tols.tol_abs, tols.tol_rel)], q

    return _run_check(
        "mond-pecaric-reverse",
        _matrix_instance(rule, f, p, a, b, alpha=alpha, m=m, M=big_m),
        hypotheses, evaluate, tols, force, waive,
    )


# ── Registry ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CheckInputs:
    """Everything a checker may consume; unused fields are ignored."""

    f: ScalarFunction
    p: WeightFunction | None = None
    g: ScalarFunction | None = None
    a: float = 0.0
    b: float = 1.0
    matrix_a: HermitianMatrix | None = None
    matrix_b: HermitianMatrix | None = None
    alpha: float = 1.0
    m: float | None = None
    big_m: float | None = None
    mode: str | None = None
    reverse: bool = False


class TheoremKind(str, Enum):
    WEIGHT = "weight"        # f, p on [0, 1]
    INTERVAL = "interval"    # f, p on [a, b]
    MATRIX = "matrix"        # f, p, A, B
    PAIR = "pair"            # f, g


@dataclass(frozen=True)
class Theorem:
    id: str
    kind: TheoremKind
    summary: str
    requires: tuple[str, ...]
    run: Callable[..., CheckResult]


def _need(value, name: str):
    if value is None:
        raise ParameterOutOfRangeError(f"missing input: {name}")
    return value


def _weight_run(checker):
    return lambda x, **kw: checker(x.f, _need(x.p, "weight"), **kw)


def _matrix_run(checker):
    return lambda x, **kw: checker(
        x.f, _need(x.p, "weight"), _need(x.matrix_a, "matrix A"), _need(x.matrix_b, "matrix B"),
        **kw,
    )


THEOREMS: dict[str, Theorem] = {t.id: t for t in [
    Theorem("scalar-levin-steckin", TheoremKind.WEIGHT,
            "int p f <= int p int f", ("convex", "symmetric", "nondecreasing"),
            _weight_run(check_scalar_levin_steckin)),
    Theorem("scalar-fejer", TheoremKind.INTERVAL,
            "int p f((a+b)/2) <= int p f(path) <= int p (f(a)+f(b))/2",
            ("convex", "symmetric", "nonnegative"),
            lambda x, **kw: check_scalar_fejer(x.f, _need(x.p, "weight"), x.a, x.b, **kw)),
    Theorem("matrix-fejer-lower", TheoremKind.MATRIX,
            "int p f((A+B)/2) weakly majorized by int p f(path)",
            ("convex", "symmetric", "nonnegative"), _matrix_run(check_matrix_fejer_lower)),
    Theorem("matrix-fejer-upper", TheoremKind.MATRIX,
            "lambda(int p f(path)) <= lambda(int p (f(A)+f(B))/2)",
            ("convex", "monotone", "symmetric", "nonnegative"),
            _matrix_run(check_matrix_fejer_upper)),
    Theorem("log-fejer", TheoremKind.MATRIX,
            "log f((A+B)/2) weakly majorized by log int p f(path)",
            ("log_convex", "positive", "strictly_positive", "symmetric"),
            _matrix_run(check_log_fejer)),
    Theorem("eig-product-fejer", TheoremKind.MATRIX,
            "top-k eigenvalue products of f((A+B)/2) <= those of int p f(path)",
            ("log_convex", "positive", "strictly_positive", "symmetric"),
            _matrix_run(check_eig_product_fejer)),
    Theorem("general-levin-steckin", TheoremKind.WEIGHT,
            "first-order bounds on int p f for any p >= 0",
            ("convex", "differentiable", "nonnegative"),
            _weight_run(check_general_levin_steckin)),
    Theorem("moment-corollary", TheoremKind.WEIGHT,
            "int f' int t p <= int t f' int p",
            ("convex", "differentiable", "symmetric", "nondecreasing"),
            _weight_run(check_moment_corollary)),
    Theorem("operator-levin-steckin", TheoremKind.MATRIX,
            "int p f(path) <= int p int f(path) (Loewner)",
            ("operator_convex", "symmetric", "nondecreasing"),
            _matrix_run(check_operator_levin_steckin)),
    Theorem("mond-pecaric-reverse", TheoremKind.MATRIX,
            "int p int f(path) <= beta int p I + alpha int p f(path) (Loewner)",
            ("enclosing", "convex", "symmetric", "nonnegative"),
            lambda x, **kw: check_mond_pecaric_reverse(
                x.f, _need(x.p, "weight"), _need(x.matrix_a, "matrix A"),
                _need(x.matrix_b, "matrix B"), x.alpha, m=x.m, big_m=x.big_m, **kw)),
    Theorem("chebyshev-variance", TheoremKind.PAIR,
            "min Var <= |cov(f, g)| <= max Var on [a, b]", ("synchronous",),
            lambda x, **kw: check_chebyshev_variance(
                x.f, _need(x.g, "second function"), x.a, x.b, x.mode, **kw)),
    Theorem("levin-steckin-refined", TheoremKind.WEIGHT,
            "int p f <= int p int f - min{bracket_p, bracket_f}",
            ("convex", "symmetric", "nondecreasing"),
            lambda x, **kw: check_levin_steckin_refined(
                x.f, _need(x.p, "weight"), reverse=x.reverse, **kw)),
    Theorem("chebyshev-am-bound", TheoremKind.PAIR,
            "cov(f, g) <= (Var f + Var g)/2 on [0, 1]", ("synchronous",),
            lambda x, **kw: check_chebyshev_am_bound(x.f, _need(x.g, "second function"), **kw)),
]}


def theorem_ids() -> list[str]:
    return sorted(THEOREMS)


def run_check(
    theorem_id: str,
    inputs: CheckInputs,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    waive=frozenset(),
) -> CheckResult:
    """Dispatch to the checker registered under ``theorem_id``."""
    try:
        theorem = THEOREMS[theorem_id]
    except KeyError:
        raise UnknownIdError(f"unknown theorem id {theorem_id!r}") from None
    return theorem.run(inputs, rule=rule, tols=tols, force=force, waive=frozenset(waive))

