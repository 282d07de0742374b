"""Seeded instance generation, sweeps and counterexample hunts.

Every random object is a pure function of a 64-bit seed (see core.prng), and
every drawn instance is described by registry ids plus that seed, so any
result can be replayed from its InstanceSpec.
"""

from __future__ import annotations

import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from core.checks import (
    CONVEXITY_FLAGS,
    THEOREMS,
    CheckInputs,
    CheckResult,
    TheoremKind,
    Verdict,
    run_check,
)
from core.errors import (
    GenerationError,
    MatineqError,
    ParameterOutOfRangeError,
    UnknownIdError,
)
from core.funcspace import (
    ScalarFunction,
    WeightFunction,
    builtin_functions,
    builtin_weights,
    lookup_function,
    lookup_weight,
    piecewise_linear_weight,
)
from core.linalg import UNIT_INTERVAL, HermitianMatrix, Interval, eigenvalues, hermitize
from core.orders import DEFAULT_TOLERANCES, Tolerances
from core.prng import PAIR_XOR, SplitMix64, derive_seed
from core.quadrature import DEFAULT_RULE, QuadratureRule

logger = logging.getLogger(__name__)

SPECTRUM_SLACK = 1e-10
ORTHOGONALITY_TOL = 1e-12
MAX_KNOTS = 4


# ── Random matrices ────────────────────────────────────────────────────────

def _complex_gaussian(rng: SplitMix64, n: int) -> np.ndarray:
    z = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            z[i, j] = complex(rng.normal(), rng.normal()) / np.sqrt(2.0)
    return z


def _orthonormalize(z: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt over columns, with one re-orthogonalization pass."""
    n = z.shape[1]
    q = np.zeros_like(z)
    for j in range(n):
        v = z[:, j].copy()
        for _ in range(2):
            for i in range(j):
                v -= np.vdot(q[:, i], v) * q[:, i]
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            raise GenerationError(f"Gram-Schmidt breakdown at column {j}")
        q[:, j] = v / norm
    return q


def draw_hermitian(seed: int, n: int, interval: Interval) -> tuple[HermitianMatrix, np.ndarray]:
    """U diag(lambda) U* with lambda uniform in ``interval``; returns the matrix and lambda."""
    if n < 1:
        raise ParameterOutOfRangeError(f"n must be >= 1, got {n}")
    if not interval.is_finite:
        raise ParameterOutOfRangeError(f"cannot draw a spectrum from {interval}")
    rng = SplitMix64(seed)
    lam = np.array([rng.uniform_range(interval.lo, interval.hi) for _ in range(n)])
    u = _orthonormalize(_complex_gaussian(rng, n))

    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if defect > ORTHOGONALITY_TOL:
        raise GenerationError(f"orthogonality defect {defect:.2e} above {ORTHOGONALITY_TOL:.0e}")
    matrix = hermitize((u * lam) @ u.conj().T)
    got = eigenvalues(matrix)
    if got[0] > interval.hi + SPECTRUM_SLACK or got[-1] < interval.lo - SPECTRUM_SLACK:
        raise GenerationError(f"spectrum [{got[-1]!r}, {got[0]!r}] escaped {interval}")
    return matrix, lam


def random_hermitian(seed: int, n: int, interval: Interval) -> HermitianMatrix:
    return draw_hermitian(seed, n, interval)[0]


def random_pair(seed: int, n: int, interval: Interval) -> tuple[HermitianMatrix, HermitianMatrix]:
    return random_hermitian(seed, n, interval), random_hermitian(seed ^ PAIR_XOR, n, interval)


# ── Random weights ─────────────────────────────────────────────────────────

def random_admissible_weight(seed: int, knots: int) -> WeightFunction:
    """Symmetric weight, non-decreasing on [0, 1/2], from nonnegative increments."""
    rng = SplitMix64(seed)
    base = rng.uniform()
    return piecewise_linear_weight(f"random:{seed}:{knots}", base,
                                   [rng.uniform() for _ in range(knots)])


def valley_weight(seed: int, knots: int) -> WeightFunction:
    """Symmetric positive weight that decreases toward t = 1/2."""
    rng = SplitMix64(seed)
    base = 1.0 + rng.uniform()
    return piecewise_linear_weight(f"valley:{seed}:{knots}", base,
                                   [-rng.uniform() / knots for _ in range(knots)])


def ramp_weight(seed: int, knots: int) -> WeightFunction:
    """Positive non-decreasing weight on [0, 1] that is not symmetric."""
    rng = SplitMix64(seed)
    base = 0.05 + rng.uniform()
    return piecewise_linear_weight(f"ramp:{seed}:{knots}", base,
                                   [0.1 + rng.uniform() for _ in range(knots)], mirror=False)


_WEIGHT_FAMILIES = {
    "random": random_admissible_weight,
    "valley": valley_weight,
    "ramp": ramp_weight,
}


def resolve_weight(weight_id: str) -> WeightFunction:
    """Registry weight, or ``random|valley|ramp:<seed>:<knots>``."""
    family, sep, rest = weight_id.partition(":")
    if not sep or family not in _WEIGHT_FAMILIES:
        return lookup_weight(weight_id)
    try:
        seed_text, knots_text = rest.split(":")
        seed, knots = int(seed_text, 0), int(knots_text)
    except ValueError:
        raise UnknownIdError(f"malformed weight id {weight_id!r}") from None
    if knots < 1:
        raise UnknownIdError(f"weight id {weight_id!r} needs at least one knot")
    return _WEIGHT_FAMILIES[family](seed, knots)


def resolve_function(function_id: str) -> ScalarFunction:
    return lookup_function(function_id)


# ── Instances ──────────────────────────────────────────────────────────────

class Perturbation(str, Enum):
    NONE = "none"
    DROP_SYMMETRY = "drop-symmetry"
    DROP_MONOTONE_WEIGHT = "drop-monotone-weight"
    DROP_CONVEXITY = "drop-convexity"


WAIVED: dict[Perturbation, frozenset[str]] = {
    Perturbation.NONE: frozenset(),
    Perturbation.DROP_SYMMETRY: frozenset({"symmetric"}),
    Perturbation.DROP_MONOTONE_WEIGHT: frozenset({"nondecreasing"}),
    Perturbation.DROP_CONVEXITY: CONVEXITY_FLAGS,
}

# trial 0 of a hunt: known negative controls
CURATED: dict[tuple[str, Perturbation], dict] = {
    ("scalar-levin-steckin", Perturbation.DROP_MONOTONE_WEIGHT):
        {"function_id": "shiftsq", "weight_id": "vee"},
    ("scalar-levin-steckin", Perturbation.DROP_SYMMETRY):
        {"function_id": "square", "weight_id": "asym"},
    ("scalar-levin-steckin", Perturbation.DROP_CONVEXITY):
        {"function_id": "scaled:shiftsq:0.0:-1.0", "weight_id": "tent"},
    ("levin-steckin-refined", Perturbation.DROP_MONOTONE_WEIGHT):
        {"function_id": "shiftsq", "weight_id": "vee", "reverse": False},
    ("moment-corollary", Perturbation.DROP_SYMMETRY):
        {"function_id": "exp", "weight_id": "asym"},
    ("scalar-fejer", Perturbation.DROP_CONVEXITY):
        {"function_id": "scaled:square:0.0:-1.0", "weight_id": "one", "a": 0.0, "b": 1.0},
    ("matrix-fejer-lower", Perturbation.DROP_CONVEXITY):
        {"function_id": "scaled:square:0.0:-1.0", "weight_id": "one",
         "interval": Interval(0.0, 1.0)},
}


@dataclass(frozen=True)
class InstanceSpec:
    """Everything needed to regenerate one check: ids, seed and scalar parameters."""

    theorem_id: str
    seed: int
    function_id: str
    weight_id: str | None = None
    g_id: str | None = None
    n: int | None = None
    interval: Interval | None = None
    a: float = 0.0
    b: float = 1.0
    alpha: float = 1.0
    m: float | None = None
    big_m: float | None = None
    mode: str | None = None
    reverse: bool = False
    perturbation: Perturbation = Perturbation.NONE

    def __post_init__(self) -> None:
        object.__setattr__(self, "perturbation", Perturbation(self.perturbation))
        if self.n is not None and self.n < 1:
            raise ParameterOutOfRangeError(f"n must be >= 1, got {self.n}")

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "seed": self.seed,
            "function_id": self.function_id,
            "weight_id": self.weight_id,
            "g_id": self.g_id,
            "n": self.n,
            "interval": self.interval.to_list() if self.interval is not None else None,
            "a": self.a,
            "b": self.b,
            "alpha": self.alpha,
            "m": self.m,
            "M": self.big_m,
            "mode": self.mode,
            "reverse": self.reverse,
            "perturbation": self.perturbation.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> InstanceSpec:
        interval = d.get("interval")
        return cls(
            theorem_id=d["theorem_id"],
            seed=int(d["seed"]),
            function_id=d["function_id"],
            weight_id=d.get("weight_id"),
            g_id=d.get("g_id"),
            n=d.get("n"),
            interval=Interval(*interval) if interval is not None else None,
            a=float(d.get("a", 0.0)),
            b=float(d.get("b", 1.0)),
            alpha=float(d.get("alpha", 1.0)),
            m=d.get("m"),
            big_m=d.get("M"),
            mode=d.get("mode"),
            reverse=bool(d.get("reverse", False)),
            perturbation=Perturbation(d.get("perturbation", "none")),
        )

    @property
    def waived(self) -> frozenset[str]:
        return WAIVED[self.perturbation]


def default_interval(f: ScalarFunction) -> Interval:
    """Spectral range used when none is requested: inside the domain of f."""
    if f.domain.lo > 0:
        return Interval(0.5, 2.0)
    if f.domain.lo == 0:
        return Interval(0.0, 1.0)
    return Interval(-1.0, 1.0)


def instance_matrices(spec: InstanceSpec) -> tuple[HermitianMatrix, HermitianMatrix] | None:
    if THEOREMS[spec.theorem_id].kind is not TheoremKind.MATRIX:
        return None
    interval = spec.interval or default_interval(resolve_function(spec.function_id))
    return random_pair(derive_seed(spec.seed, 1), spec.n or 1, interval)


def build_inputs(spec: InstanceSpec, matrices=None) -> CheckInputs:
    """Resolve ids; matrices default to the seeded pair."""
    if spec.theorem_id not in THEOREMS:
        raise UnknownIdError(f"unknown theorem id {spec.theorem_id!r}")
    pair = matrices if matrices is not None else instance_matrices(spec)
    return CheckInputs(
        f=resolve_function(spec.function_id),
        p=resolve_weight(spec.weight_id) if spec.weight_id else None,
        g=resolve_function(spec.g_id) if spec.g_id else None,
        a=spec.a,
        b=spec.b,
        matrix_a=pair[0] if pair else None,
        matrix_b=pair[1] if pair else None,
        alpha=spec.alpha,
        m=spec.m,
        big_m=spec.big_m,
        mode=spec.mode,
        reverse=spec.reverse,
    )


def run_instance(
    spec: InstanceSpec,
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    matrices=None,
) -> CheckResult:
    try:
        inputs = build_inputs(spec, matrices)
        result = run_check(spec.theorem_id, inputs, rule, tols, force=force, waive=spec.waived)
    except MatineqError as e:
        logger.warning("instance %s/%d failed to build: %s", spec.theorem_id, spec.seed, e)
        return CheckResult(spec.theorem_id, spec.to_dict(), Verdict.ERROR,
                           tolerances=tols, error=f"{type(e).__name__}: {e}", forced=force,
                           waived=tuple(sorted(spec.waived)))
    result.instance.update(seed=spec.seed, perturbation=spec.perturbation.value)
    if spec.interval is not None:
        result.instance["interval"] = spec.interval.to_list()
    return result


# ── Drawing ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class DrawOptions:
    """Knobs shared by sweeps and hunts; id filters override admissibility."""

    n_max: int = 5
    interval: Interval | None = None
    function_ids: tuple[str, ...] = ()
    weight_ids: tuple[str, ...] = ()
    broad: bool = False

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ParameterOutOfRangeError(f"n_max must be >= 1, got {self.n_max}")


_FUNCTION_FLAG = {
    "convex": lambda f: f.flags.convex,
    "operator_convex": lambda f: f.flags.operator_convex,
    "log_convex": lambda f: f.flags.log_convex,
    "positive": lambda f: f.flags.positive,
    "monotone": lambda f: f.flags.monotone_increasing or f.flags.monotone_decreasing,
    "differentiable": lambda f: f.flags.differentiable,
}

_WEIGHT_FLAG = {
    "symmetric": "symmetric",
    "nonnegative": "nonnegative",
    "nondecreasing": "nondecreasing_first_half",
    "strictly_positive": "strictly_positive",
}

# builtin weights whose refined correction term is sound
_REFINED_WEIGHTS = ("one", "parabola_bump", "tent", "plateau")


def _admissible_functions(theorem_id: str, requires, unit: bool) -> list[ScalarFunction]:
    pool = []
    for f in builtin_functions():
        if unit and not f.domain.contains_interval(UNIT_INTERVAL):
            continue
        if all(_FUNCTION_FLAG[r](f) for r in requires if r in _FUNCTION_FLAG):
            pool.append(f)
    if not pool:
        raise GenerationError(f"no registry function fits {theorem_id}")
    return pool


def _weight_ok(p: WeightFunction, requires) -> bool:
    return all(getattr(p.flags, _WEIGHT_FLAG[r]) for r in requires if r in _WEIGHT_FLAG)


def _draw_weight(rng: SplitMix64, theorem_id: str, requires, perturbation: Perturbation,
                 broad: bool) -> str:
    knots = rng.randint(1, MAX_KNOTS)
    child = rng.next_u64()
    if perturbation is Perturbation.DROP_SYMMETRY:
        return rng.choice(["asym", f"ramp:{child}:{knots}"])
    if perturbation is Perturbation.DROP_MONOTONE_WEIGHT:
        return rng.choice(["vee", f"valley:{child}:{knots}"])
    if theorem_id == "levin-steckin-refined" and not broad:
        return rng.choice(list(_REFINED_WEIGHTS))
    pool = [p.id for p in builtin_weights() if _weight_ok(p, requires)]
    generated = random_admissible_weight(child, knots)
    if _weight_ok(generated, requires):
        pool.append(generated.id)
    return rng.choice(pool)


def _round(x: float) -> float:
    return round(x, 3)


def _sub_interval(rng: SplitMix64, interval: Interval) -> tuple[float, float]:
    w = interval.width
    a = _round(interval.lo + 0.4 * w * rng.uniform())
    b = _round(interval.hi - 0.4 * w * rng.uniform())
    return a, b


def _concave_image(rng: SplitMix64, f: ScalarFunction, theorem_id: str) -> str:
    if theorem_id in ("log-fejer", "eig-product-fejer"):
        return f"scaled:neg_log:{_round(rng.uniform_range(1.0, 3.0))!r}:-1.0"
    return f"scaled:{f.id}:0.0:{-_round(rng.uniform_range(0.5, 2.0))!r}"


def _draw_pair_functions(rng: SplitMix64, theorem_id: str, opts: DrawOptions):
    """(f, g, mode) for the synchronous-pair theorems."""
    unit = theorem_id == "chebyshev-am-bound"
    if opts.function_ids:
        f_id = rng.choice(list(opts.function_ids))
        g_id = rng.choice(list(opts.function_ids))
        return f_id, g_id, None
    functions = builtin_functions()
    if unit:
        functions = [f for f in functions if f.domain.contains_interval(UNIT_INTERVAL)]
    if opts.broad:
        f = rng.choice(functions)
        g = rng.choice([h for h in functions if h.domain.contains_interval(
            opts.interval or default_interval(f))])
        return f.id, g.id, None
    if unit:
        increasing = [f.id for f in functions if f.flags.monotone_increasing]
        return rng.choice(increasing), rng.choice(increasing), None
    f = rng.choice(functions)
    c0 = _round(rng.uniform_range(-1.0, 1.0))
    c1 = _round(rng.uniform_range(0.25, 2.0)) * (1 if rng.uniform() < 0.5 else -1)
    mode = "synchronous" if c1 > 0 else "asynchronous"
    return f.id, f"scaled:{f.id}:{c0!r}:{float(c1)!r}", mode


def draw_instance(
    theorem_id: str,
    seed: int,
    opts: DrawOptions = DrawOptions(),
    perturbation: Perturbation = Perturbation.NONE,
) -> InstanceSpec:
    """Draw one instance of ``theorem_id`` from ``seed``."""
    try:
        theorem = THEOREMS[theorem_id]
    except KeyError:
        raise UnknownIdError(f"unknown theorem id {theorem_id!r}") from None
    perturbation = Perturbation(perturbation)
    rng = SplitMix64(seed)

    if theorem.kind is TheoremKind.PAIR:
        f_id, g_id, mode = _draw_pair_functions(rng, theorem_id, opts)
        f = resolve_function(f_id)
        interval = opts.interval or default_interval(f)
        a, b = _sub_interval(rng, interval) if theorem_id == "chebyshev-variance" else (0.0, 1.0)
        return InstanceSpec(theorem_id, seed, f_id, g_id=g_id, a=a, b=b, mode=mode,
                            perturbation=perturbation)

    unit = theorem.kind is TheoremKind.WEIGHT
    if opts.function_ids:
        f_id = rng.choice(list(opts.function_ids))
        f = resolve_function(f_id)
    else:
        f = rng.choice(_admissible_functions(theorem_id, theorem.requires, unit))
        f_id = f.id
        if perturbation is Perturbation.DROP_CONVEXITY:
            f_id = _concave_image(rng, f, theorem_id)

    if opts.weight_ids:
        weight_id = rng.choice(list(opts.weight_ids))
    else:
        weight_id = _draw_weight(rng, theorem_id, theorem.requires, perturbation, opts.broad)

    interval = opts.interval or default_interval(resolve_function(f_id))
    spec = InstanceSpec(theorem_id, seed, f_id, weight_id=weight_id, perturbation=perturbation)
    if theorem.kind is TheoremKind.INTERVAL:
        a, b = _sub_interval(rng, interval)
        return replace(spec, a=a, b=b)
    if theorem.kind is TheoremKind.MATRIX:
        return replace(
            spec,
            n=rng.randint(1, opts.n_max),
            interval=interval,
            alpha=_round(rng.uniform_range(0.0, 2.0)) if theorem_id == "mond-pecaric-reverse"
            else 1.0,
        )
    return replace(spec, reverse=theorem_id == "levin-steckin-refined" and rng.uniform() < 0.5)


def _curated(theorem_id: str, seed: int, perturbation: Perturbation,
             opts: DrawOptions) -> InstanceSpec | None:
    fields = CURATED.get((theorem_id, perturbation))
    if fields is None:
        return None
    spec = draw_instance(theorem_id, seed, opts, perturbation)
    return replace(spec, **fields)


# ── Sweeps and hunts ───────────────────────────────────────────────────────

def _salt(text: str) -> int:
    return zlib.crc32(text.encode("utf-8"))


@dataclass
class Trial:
    spec: InstanceSpec
    result: CheckResult


def run_trials(
    specs: list[InstanceSpec],
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    threads: int = 1,
) -> list[Trial]:
    """Run specs on a worker pool; output keeps the input order."""

    def run(spec: InstanceSpec) -> Trial:
        return Trial(spec, run_instance(spec, rule, tols, force))

    if threads <= 1 or len(specs) <= 1:
        return [run(s) for s in specs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, specs))


def sweep(
    theorem_ids: list[str],
    trials: int,
    seed: int,
    opts: DrawOptions = DrawOptions(),
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    force: bool = False,
    threads: int = 1,
) -> list[Trial]:
    """``trials`` random admissible instances for each theorem, in theorem then trial order."""
    if trials < 1:
        raise ParameterOutOfRangeError(f"trials must be >= 1, got {trials}")
    specs = [
        draw_instance(tid, derive_seed(seed, _salt(tid), i), opts)
        for tid in theorem_ids
        for i in range(trials)
    ]
    logger.info("sweep: %d instances over %d theorems", len(specs), len(theorem_ids))
    return run_trials(specs, rule, tols, force, threads)


@dataclass
class HuntOutcome:
    theorem_id: str
    perturbation: Perturbation
    trials: list[Trial] = field(default_factory=list)

    @property
    def findings(self) -> list[Trial]:
        return [t for t in self.trials if t.result.verdict is Verdict.VIOLATED]


def hunt(
    theorem_id: str,
    trials: int,
    seed: int,
    perturbation: Perturbation = Perturbation.NONE,
    opts: DrawOptions = DrawOptions(),
    rule: QuadratureRule = DEFAULT_RULE,
    tols: Tolerances = DEFAULT_TOLERANCES,
    threads: int = 1,
) -> HuntOutcome:
    """Random search for violations.

    With a perturbation the matching hypothesis flags are waived and the
    draws are biased toward instances lacking them; trial 0 is the curated
    negative control when one exists.
    """
    if trials < 1:
        raise ParameterOutOfRangeError(f"trials must be >= 1, got {trials}")
    perturbation = Perturbation(perturbation)
    if perturbation is Perturbation.NONE:
        opts = replace(opts, broad=True)
    salts = (_salt(theorem_id), _salt(perturbation.value))
    specs = []
    for i in range(trials):
        trial_seed = derive_seed(seed, *salts, i)
        curated = _curated(theorem_id, trial_seed, perturbation, opts) if i == 0 else None
        specs.append(curated or draw_instance(theorem_id, trial_seed, opts, perturbation))
    outcome = HuntOutcome(theorem_id, perturbation, run_trials(specs, rule, tols, False, threads))
    logger.info("hunt %s/%s: %d trials, %d findings", theorem_id, perturbation.value,
                trials, len(outcome.findings))
    return outcome
