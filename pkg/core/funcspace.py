"""Scalar function and weight function registry.

Functions and weights carry declared property flags; the sampled validators
in this module check those flags on grids. Also home of the secant
coefficients a_f, b_f and the reverse-inequality constant beta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Callable

import numpy as np

from core.errors import (
    DegenerateIntervalError,
    DomainMismatchError,
    NonPositiveFunctionError,
    ParameterOutOfRangeError,
    UnknownIdError,
)
from core.linalg import UNIT_INTERVAL, Interval

logger = logging.getLogger(__name__)

OPEN_ZERO = 1e-300  # lower endpoint standing in for the open end of (0, inf)
REAL_LINE = Interval(-math.inf, math.inf)
NONNEGATIVE = Interval(0.0, math.inf)
POSITIVE = Interval(OPEN_ZERO, math.inf)

CONVEXITY_TOL = 1e-10
WEIGHT_TOL = 1e-12
SYNCHRONY_TOL = 1e-12
DEFAULT_GRID = 1001
BETA_GRID = 2001
GOLDEN_TOL = 1e-10
DEGENERATE_WIDTH = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


# ── Types ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FunctionFlags:
    convex: bool = False
    log_convex: bool = False
    operator_convex: bool = False
    monotone_increasing: bool = False
    monotone_decreasing: bool = False
    positive: bool = False
    differentiable: bool = True

    def names(self) -> list[str]:
        return [name for name, value in self.__dict__.items() if value]


@dataclass(frozen=True)
class ScalarFunction:
    """Real function with analytic derivative, domain and property flags.

    ``eval`` and ``deriv`` accept floats or numpy arrays. ``kinks`` lists
    points where f is not smooth, so integrators can put panel edges there.
    """

    id: str
    eval: Callable
    deriv: Callable
    domain: Interval
    flags: FunctionFlags
    kinks: tuple[float, ...] = ()
    description: str = ""

    def __call__(self, x):
        return self.eval(x)


@dataclass(frozen=True)
class WeightFlags:
    nonnegative: bool = False
    symmetric: bool = False
    nondecreasing_first_half: bool = False
    strictly_positive: bool = False
    normalized: bool = False

    def names(self) -> list[str]:
        return [name for name, value in self.__dict__.items() if value]


@dataclass(frozen=True)
class WeightFunction:
    """Weight p on [0, 1]; ``strictly_positive`` means p > 0 on the open interval."""

    id: str
    eval: Callable
    flags: WeightFlags
    breakpoints: tuple[float, ...] = ()
    description: str = ""

    def __call__(self, t):
        return self.eval(t)


@dataclass(frozen=True)
class SecantCoeffs:
    a_f: float
    b_f: float


@dataclass(frozen=True)
class SampledCheck:
    """Outcome of a grid validator; ``witness`` is the most violating grid pair."""

    passed: bool
    worst_slack: float
    witness: tuple[float, float] | None = None


class Synchrony(str, Enum):
    SYNCHRONOUS = "synchronous"
    ASYNCHRONOUS = "asynchronous"
    NEITHER = "neither"


@dataclass(frozen=True)
class SynchronyReport:
    kind: Synchrony
    min_product: float
    max_product: float
    # pair where (f(t)-f(s))(g(t)-g(s)) is most negative / most positive
    negative_witness: tuple[float, float] | None = None
    positive_witness: tuple[float, float] | None = None


# ── Builtin functions ──────────────────────────────────────────────────────

def _no_derivative(x):
    raise DomainMismatchError("function is not differentiable; derivative-based checks exclude it")


def _identity(x):
    return np.asarray(x, dtype=float) * 1.0


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    return x * np.log(x)


def affine(c0: float, c1: float, id: str | None = None) -> ScalarFunction:
    """c0 + c1*x on the real line."""
    return ScalarFunction(
        id=id or f"affine:{c0!r},{c1!r}",
        eval=lambda x: c0 + c1 * np.asarray(x, dtype=float),
        deriv=lambda x: np.full_like(np.asarray(x, dtype=float), c1),
        domain=REAL_LINE,
        flags=FunctionFlags(
            convex=True,
            operator_convex=True,
            monotone_increasing=c1 >= 0,
            monotone_decreasing=c1 <= 0,
        ),
        description=f"{c0!r} + {c1!r}*x",
    )


def scaled(base: ScalarFunction, c0: float, c1: float) -> ScalarFunction:
    """c0 + c1*base(x); concave when c1 < 0 and base is convex."""
    bf = base.flags
    up = c1 >= 0
    flags = FunctionFlags(
        convex=(bf.convex and up) or c1 == 0,
        operator_convex=(bf.operator_convex and up) or c1 == 0,
        log_convex=bf.log_convex and c0 == 0 and c1 > 0,
        monotone_increasing=(bf.monotone_increasing if up else bf.monotone_decreasing) or c1 == 0,
        monotone_decreasing=(bf.monotone_decreasing if up else bf.monotone_increasing) or c1 == 0,
        positive=bf.positive and c0 >= 0 and c1 > 0,
        differentiable=bf.differentiable,
    )
    deriv = (lambda x: c1 * base.deriv(x)) if bf.differentiable else _no_derivative
    return ScalarFunction(
        id=f"scaled:{base.id}:{c0!r}:{c1!r}",
        eval=lambda x: c0 + c1 * base.eval(x),
        deriv=deriv,
        domain=base.domain,
        flags=flags,
        kinks=base.kinks,
        description=f"{c0!r} + {c1!r}*{base.id}(x)",
    )


def builtin_functions() -> list[ScalarFunction]:
    return [
        ScalarFunction(
            "identity", _identity, lambda x: np.ones_like(np.asarray(x, dtype=float)),
            REAL_LINE,
            FunctionFlags(convex=True, operator_convex=True, monotone_increasing=True),
            description="x",
        ),
        affine(1.0, 2.0, id="affine"),
        ScalarFunction(
            "square", np.square, lambda x: 2.0 * np.asarray(x, dtype=float),
            NONNEGATIVE,
            FunctionFlags(convex=True, operator_convex=True, monotone_increasing=True),
            description="x^2 on [0, inf)",
        ),
        ScalarFunction(
            "shiftsq", lambda x: np.square(np.asarray(x, dtype=float) - 0.5),
            lambda x: 2.0 * (np.asarray(x, dtype=float) - 0.5),
            REAL_LINE,
            FunctionFlags(convex=True, operator_convex=True),
            description="(x - 1/2)^2",
        ),
        ScalarFunction(
            "exp", np.exp, np.exp, REAL_LINE,
            FunctionFlags(convex=True, log_convex=True, monotone_increasing=True, positive=True),
            description="e^x",
        ),
        ScalarFunction(
            "reciprocal", lambda x: 1.0 / np.asarray(x, dtype=float),
            lambda x: -1.0 / np.square(np.asarray(x, dtype=float)),
            POSITIVE,
            FunctionFlags(
                convex=True, log_convex=True, operator_convex=True,
                monotone_decreasing=True, positive=True,
            ),
            description="1/x on (0, inf)",
        ),
        ScalarFunction(
            "neg_log", lambda x: -np.log(x), lambda x: -1.0 / np.asarray(x, dtype=float),
            POSITIVE,
            FunctionFlags(convex=True, operator_convex=True, monotone_decreasing=True),
            description="-ln x on (0, inf)",
        ),
        ScalarFunction(
            "xlogx", _xlogx, lambda x: np.log(x) + 1.0, POSITIVE,
            FunctionFlags(convex=True, operator_convex=True),
            description="x ln x on (0, inf)",
        ),
        ScalarFunction(
            "abs_shift", lambda x: np.abs(np.asarray(x, dtype=float) - 0.5), _no_derivative,
            REAL_LINE,
            FunctionFlags(convex=True, differentiable=False),
            kinks=(0.5,),
            description="|x - 1/2|",
        ),
        ScalarFunction(
            "sin", np.sin, np.cos, REAL_LINE, FunctionFlags(),
            description="sin x (non-convex control)",
        ),
    ]


_FUNCTIONS = MappingProxyType({f.id: f for f in builtin_functions()})


def lookup_function(function_id: str) -> ScalarFunction:
    """Resolve a registry id, ``affine:c0,c1`` or ``scaled:<base>:<c0>:<c1>``."""
    if function_id in _FUNCTIONS:
        return _FUNCTIONS[function_id]
    try:
        if function_id.startswith("affine:"):
            c0, c1 = (float(x) for x in function_id[len("affine:"):].split(","))
            return affine(c0, c1)
        if function_id.startswith("scaled:"):
            body = function_id[len("scaled:"):]
            base_id, c0, c1 = body.rsplit(":", 2)
            return scaled(lookup_function(base_id), float(c0), float(c1))
    except (ValueError, UnknownIdError) as e:
        raise UnknownIdError(f"malformed function id {function_id!r}: {e}") from e
    raise UnknownIdError(f"unknown function id {function_id!r}")


def function_ids() -> list[str]:
    return sorted(_FUNCTIONS)


# ── Builtin weights ────────────────────────────────────────────────────────

def _as_float_array(t):
    return np.asarray(t, dtype=float)


def builtin_weights() -> list[WeightFunction]:
    return [
        WeightFunction(
            "one", lambda t: np.ones_like(_as_float_array(t)),
            WeightFlags(True, True, True, True, True),
            description="p = 1",
        ),
        WeightFunction(
            "parabola_bump", lambda t: _as_float_array(t) * (1.0 - _as_float_array(t)),
            WeightFlags(nonnegative=True, symmetric=True, nondecreasing_first_half=True,
                        strictly_positive=True),
            description="t(1 - t)",
        ),
        WeightFunction(
            "tent", lambda t: np.minimum(_as_float_array(t), 1.0 - _as_float_array(t)),
            WeightFlags(nonnegative=True, symmetric=True, nondecreasing_first_half=True,
                        strictly_positive=True),
            breakpoints=(0.5,),
            description="min(t, 1 - t)",
        ),
        WeightFunction(
            "vee", lambda t: np.abs(_as_float_array(t) - 0.5),
            WeightFlags(nonnegative=True, symmetric=True),
            breakpoints=(0.5,),
            description="|t - 1/2| (decreasing on [0, 1/2])",
        ),
        WeightFunction(
            "plateau",
            lambda t: np.clip(4.0 * np.minimum(_as_float_array(t), 1.0 - _as_float_array(t)),
                              0.0, 1.0),
            WeightFlags(nonnegative=True, symmetric=True, nondecreasing_first_half=True,
                        strictly_positive=True),
            breakpoints=(0.25, 0.5, 0.75),
            description="clamp(4 min(t, 1 - t), 0, 1)",
        ),
        WeightFunction(
            "asym", _identity,
            WeightFlags(nonnegative=True, nondecreasing_first_half=True, strictly_positive=True),
            description="t (not symmetric)",
        ),
    ]


_WEIGHTS = MappingProxyType({p.id: p for p in builtin_weights()})


def lookup_weight(weight_id: str) -> WeightFunction:
    try:
        return _WEIGHTS[weight_id]
    except KeyError:
        raise UnknownIdError(f"unknown weight id {weight_id!r}") from None


def weight_ids() -> list[str]:
    return sorted(_WEIGHTS)


def piecewise_linear_weight(
    weight_id: str,
    base: float,
    increments,
    mirror: bool = True,
) -> WeightFunction:
    """Piecewise-linear weight through equally spaced knot values.

    Knot values are base, base + inc_1, base + inc_1 + inc_2, ... With
    ``mirror`` the knots span [0, 1/2] and the profile is reflected onto
    [1/2, 1]; otherwise they span all of [0, 1]. Mirrored nonnegative
    increments give an admissible (symmetric, non-decreasing on [0, 1/2])
    weight.
    """
    incs = np.asarray(list(increments), dtype=float)
    if incs.size == 0:
        raise ParameterOutOfRangeError("piecewise-linear weight needs at least one knot")
    knots = len(incs)
    xs = np.linspace(0.0, 0.5 if mirror else 1.0, knots + 1)
    vs = base + np.concatenate(([0.0], np.cumsum(incs)))

    if mirror:
        def p(t):
            t = _as_float_array(t)
            return np.interp(np.minimum(t, 1.0 - t), xs, vs)

        breaks = {float(x) for x in xs[1:]} | {float(1.0 - x) for x in xs[1:-1]}
        interior = vs[1:]
    else:
        def p(t):
            return np.interp(_as_float_array(t), xs, vs)

        breaks = {float(x) for x in xs[1:-1]}
        interior = vs[1:-1] if knots > 1 else vs

    nonneg = bool(np.min(vs) >= 0)
    return WeightFunction(
        weight_id,
        p,
        WeightFlags(
            nonnegative=nonneg,
            symmetric=mirror,
            nondecreasing_first_half=bool(np.all(incs >= 0)),
            strictly_positive=nonneg and bool(np.min(interior) > 0),
        ),
        breakpoints=tuple(sorted(breaks)),
        description=f"piecewise linear, base {base:.4g}, {knots} knots"
        + ("" if mirror else ", not mirrored"),
    )


# ── Sampled validators ─────────────────────────────────────────────────────

def _grid(interval: Interval, grid_size: int) -> np.ndarray:
    if grid_size < 3:
        raise ParameterOutOfRangeError(f"grid_size must be >= 3, got {grid_size}")
    if not interval.is_finite:
        raise DomainMismatchError(f"sampling needs a finite interval, got {interval}")
    return np.linspace(interval.lo, interval.hi, grid_size)


def _require_subset(f: ScalarFunction, interval: Interval) -> None:
    if not f.domain.contains_interval(interval):
        raise DomainMismatchError(
            f"[{interval.lo}, {interval.hi}] is not inside the domain of {f.id}"
        )


def _midpoint_convexity(g: Callable, xs: np.ndarray) -> SampledCheck:
    gx = np.asarray(g(xs), dtype=float)
    mids = 0.5 * (xs[:, None] + xs[None, :])
    slack = 0.5 * (gx[:, None] + gx[None, :]) - np.asarray(g(mids), dtype=float)
    i, j = np.triu_indices(len(xs), k=1)
    pair_slack = slack[i, j]
    k = int(np.argmin(pair_slack))
    worst = float(pair_slack[k])
    return SampledCheck(worst >= -CONVEXITY_TOL, worst, (float(xs[i[k]]), float(xs[j[k]])))


def check_convex_sampled(
    f: ScalarFunction, interval: Interval, grid_size: int = DEFAULT_GRID
) -> SampledCheck:
    """Midpoint convexity f((x+y)/2) <= (f(x)+f(y))/2 + 1e-10 over all grid pairs."""
    _require_subset(f, interval)
    return _midpoint_convexity(f.eval, _grid(interval, grid_size))


def check_log_convex_sampled(
    f: ScalarFunction, interval: Interval, grid_size: int = DEFAULT_GRID
) -> SampledCheck:
    _require_subset(f, interval)
    xs = _grid(interval, grid_size)
    fx = np.asarray(f.eval(xs), dtype=float)
    if np.any(fx <= 0):
        bad = float(xs[int(np.argmin(fx))])
        raise NonPositiveFunctionError(f"{f.id} is not positive at x = {bad!r}")
    return _midpoint_convexity(lambda x: np.log(f.eval(x)), xs)


def check_monotone_sampled(
    f: ScalarFunction, interval: Interval, grid_size: int = DEFAULT_GRID
) -> tuple[bool, bool]:
    """(non-decreasing, non-increasing) on the grid, up to 1e-12."""
    _require_subset(f, interval)
    diffs = np.diff(np.asarray(f.eval(_grid(interval, grid_size)), dtype=float))
    return bool(np.all(diffs >= -SYNCHRONY_TOL)), bool(np.all(diffs <= SYNCHRONY_TOL))


def check_positive_sampled(
    f: ScalarFunction, interval: Interval, grid_size: int = DEFAULT_GRID
) -> bool:
    _require_subset(f, interval)
    return bool(np.all(np.asarray(f.eval(_grid(interval, grid_size)), dtype=float) > 0))


def check_synchronous(
    f: ScalarFunction, g: ScalarFunction, interval: Interval, grid_size: int = DEFAULT_GRID
) -> SynchronyReport:
    """Classify f, g by the sign of (f(t)-f(s))(g(t)-g(s)) over all grid pairs."""
    _require_subset(f, interval)
    _require_subset(g, interval)
    xs = _grid(interval, grid_size)
    fx = np.asarray(f.eval(xs), dtype=float)
    gx = np.asarray(g.eval(xs), dtype=float)
    prod = (fx[:, None] - fx[None, :]) * (gx[:, None] - gx[None, :])
    i, j = np.triu_indices(len(xs), k=1)
    pair = prod[i, j]
    kmin, kmax = int(np.argmin(pair)), int(np.argmax(pair))
    lo, hi = float(pair[kmin]), float(pair[kmax])
    if lo >= -SYNCHRONY_TOL:
        return SynchronyReport(Synchrony.SYNCHRONOUS, lo, hi)
    if hi <= SYNCHRONY_TOL:
        return SynchronyReport(Synchrony.ASYNCHRONOUS, lo, hi)
    return SynchronyReport(
        Synchrony.NEITHER, lo, hi,
        negative_witness=(float(xs[i[kmin]]), float(xs[j[kmin]])),
        positive_witness=(float(xs[i[kmax]]), float(xs[j[kmax]])),
    )


@dataclass(frozen=True)
class WeightFlagReport:
    symmetric: bool
    nonnegative: bool
    nondecreasing_first_half: bool
    strictly_positive: bool
    asymmetry: float = field(default=0.0)


def check_weight_flags(p: WeightFunction, grid_size: int = DEFAULT_GRID) -> WeightFlagReport:
    """Sampled truth of each weight flag on a uniform grid of [0, 1]."""
    ts = _grid(UNIT_INTERVAL, grid_size)
    pt = np.asarray(p.eval(ts), dtype=float)
    asym = float(np.max(np.abs(pt - np.asarray(p.eval(1.0 - ts), dtype=float))))
    first_half = pt[ts <= 0.5]
    return WeightFlagReport(
        symmetric=asym <= WEIGHT_TOL,
        nonnegative=bool(np.all(pt >= -WEIGHT_TOL)),
        nondecreasing_first_half=bool(np.all(np.diff(first_half) >= -WEIGHT_TOL)),
        strictly_positive=bool(np.all(pt[1:-1] > 0)),
        asymmetry=asym,
    )


# ── Secant and beta ────────────────────────────────────────────────────────

def secant_coeffs(f: ScalarFunction, m: float, big_m: float) -> SecantCoeffs:
    """Slope and intercept of the chord of f over [m, M]."""
    if big_m - m <= DEGENERATE_WIDTH:
        raise DegenerateIntervalError(f"degenerate interval [{m}, {big_m}]")
    _require_subset(f, Interval(m, big_m))
    fm, f_big = float(f.eval(m)), float(f.eval(big_m))
    width = big_m - m
    return SecantCoeffs((f_big - fm) / width, (big_m * fm - m * f_big) / width)


def _golden_max(h: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    while b - a > GOLDEN_TOL:
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - _INV_PHI * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + _INV_PHI * (b - a)
            hd = h(d)
    x = 0.5 * (a + b)
    return x, h(x)


def beta_argmax(f: ScalarFunction, m: float, big_m: float, alpha: float) -> tuple[float, float]:
    """(x*, beta) maximizing a_f x + b_f - alpha f(x) over [m, M]."""
    if alpha < 0:
        raise ParameterOutOfRangeError(f"alpha must be >= 0, got {alpha!r}")
    sc = secant_coeffs(f, m, big_m)

    def h(x):
        return sc.a_f * x + sc.b_f - alpha * np.asarray(f.eval(x), dtype=float)

    xs = np.linspace(m, big_m, BETA_GRID)
    hx = h(xs)
    k = int(np.argmax(hx))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    x_ref, h_ref = _golden_max(lambda x: float(h(x)), float(lo), float(hi))

    candidates = [(float(xs[k]), float(hx[k])), (x_ref, h_ref),
                  (m, float(h(m))), (big_m, float(h(big_m)))]
    return max(candidates, key=lambda c: c[1])


def beta_max(f: ScalarFunction, m: float, big_m: float, alpha: float) -> float:
    return beta_argmax(f, m, big_m, alpha)[1]


def with_flags(p: WeightFunction, **changes) -> WeightFunction:
    return replace(p, flags=replace(p.flags, **changes))
