"""Composite quadrature for scalar and Hermitian-matrix integrands.

Node sums are accumulated with a pairwise tree so that results do not depend
on evaluation order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from core.errors import (
    DegenerateWeightError,
    DimensionMismatchError,
    NonFiniteSampleError,
    ParameterOutOfRangeError,
)
from core.funcspace import WeightFunction, WeightFlags
from core.linalg import UNIT_INTERVAL, HermitianMatrix, Interval, hermitize

logger = logging.getLogger(__name__)

DEGENERATE_WEIGHT_TOL = 1e-12
NORMALIZED_TOL = 1e-12


class Scheme(str, Enum):
    SIMPSON = "simpson"
    GAUSS = "gauss"


@dataclass(frozen=True)
class QuadratureRule:
    scheme: Scheme = Scheme.GAUSS
    panels: int = 32
    nodes_per_panel: int = 5

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.panels < 1:
            raise ParameterOutOfRangeError(f"panels must be >= 1, got {self.panels}")
        if self.nodes_per_panel < 1:
            raise ParameterOutOfRangeError(
                f"nodes_per_panel must be >= 1, got {self.nodes_per_panel}"
            )

    def refined(self, factor: int = 2) -> QuadratureRule:
        return replace(self, panels=self.panels * factor)

    def to_dict(self) -> dict:
        d = {"scheme": self.scheme.value, "panels": self.panels}
        if self.scheme is Scheme.GAUSS:
            d["nodes_per_panel"] = self.nodes_per_panel
        return d

    @classmethod
    def from_dict(cls, d: dict) -> QuadratureRule:
        return cls(Scheme(d["scheme"]), int(d["panels"]), int(d.get("nodes_per_panel", 5)))


DEFAULT_RULE = QuadratureRule()


# ── Nodes ──────────────────────────────────────────────────────────────────

@lru_cache(maxsize=64)
def _gauss_reference(k: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(k)


def _panel_edges(lo: float, hi: float, panels: int, breakpoints: tuple[float, ...]) -> np.ndarray:
    edges = np.linspace(lo, hi, panels + 1)
    extra = [b for b in breakpoints if lo < b < hi]
    if extra:
        edges = np.union1d(edges, extra)
    return edges


@lru_cache(maxsize=256)
def _nodes(
    rule: QuadratureRule, lo: float, hi: float, breakpoints: tuple[float, ...]
) -> tuple[np.ndarray, np.ndarray]:
    edges = _panel_edges(lo, hi, rule.panels, breakpoints)
    left, right = edges[:-1], edges[1:]
    widths = right - left
    if rule.scheme is Scheme.SIMPSON:
        mids = 0.5 * (left + right)
        nodes = np.empty(2 * len(widths) + 1)
        nodes[0::2] = edges
        nodes[1::2] = mids
        weights = np.zeros_like(nodes)
        weights[0:-1:2] += widths / 6.0
        weights[2::2] += widths / 6.0
        weights[1::2] = 4.0 * widths / 6.0
    else:
        x, w = _gauss_reference(rule.nodes_per_panel)
        half = 0.5 * widths
        nodes = ((left + right)[:, None] * 0.5 + half[:, None] * x[None, :]).reshape(-1)
        weights = (half[:, None] * w[None, :]).reshape(-1)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def rule_nodes(
    rule: QuadratureRule, interval: Interval, breakpoints=()
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``rule`` on ``interval``; breakpoints become panel edges."""
    if not interval.is_finite:
        raise ParameterOutOfRangeError(f"cannot integrate over {interval}")
    return _nodes(rule, float(interval.lo), float(interval.hi),
                  tuple(sorted({float(b) for b in breakpoints})))


def _tree_sum(terms: np.ndarray) -> np.ndarray:
    """Pairwise sum along axis 0 in a fixed order."""
    terms = np.asarray(terms)
    if terms.shape[0] == 0:
        return np.zeros(terms.shape[1:], dtype=terms.dtype)
    while terms.shape[0] > 1:
        if terms.shape[0] % 2:
            head = terms[:-1:2] + terms[1::2]
            terms = np.concatenate([head, terms[-1:]], axis=0)
        else:
            terms = terms[0::2] + terms[1::2]
    return terms[0]


# ── Integrals ──────────────────────────────────────────────────────────────

def integrate_scalar(
    g: Callable[[float], float],
    interval: Interval,
    rule: QuadratureRule = DEFAULT_RULE,
    breakpoints=(),
) -> float:
    nodes, weights = rule_nodes(rule, interval, breakpoints)
    samples = np.array([float(g(float(t))) for t in nodes])
    bad = ~np.isfinite(samples)
    if np.any(bad):
        raise NonFiniteSampleError(float(nodes[np.argmax(bad)]))
    return float(_tree_sum(weights * samples))


def integrate_matrix(
    g: Callable[[float], HermitianMatrix],
    interval: Interval,
    rule: QuadratureRule = DEFAULT_RULE,
    breakpoints=(),
) -> HermitianMatrix:
    nodes, weights = rule_nodes(rule, interval, breakpoints)
    samples = []
    n = None
    for t in nodes:
        value = g(float(t))
        arr = np.asarray(getattr(value, "entries", value), dtype=np.complex128)
        if n is None:
            n = arr.shape
        elif arr.shape != n:
            raise DimensionMismatchError(
                f"integrand changed shape from {n} to {arr.shape} at t = {float(t)!r}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteSampleError(float(t))
        samples.append(arr)
    logger.debug("integrate_matrix: %d nodes, shape %s", len(nodes), n)
    stacked = weights[:, None, None] * np.stack(samples)
    return hermitize(_tree_sum(stacked))


# ── Weights ────────────────────────────────────────────────────────────────

def weight_total(p: WeightFunction, rule: QuadratureRule = DEFAULT_RULE) -> float:
    return integrate_scalar(p.eval, UNIT_INTERVAL, rule, p.breakpoints)


def weight_first_moment(p: WeightFunction, rule: QuadratureRule = DEFAULT_RULE) -> float:
    return integrate_scalar(lambda t: t * p.eval(t), UNIT_INTERVAL, rule, p.breakpoints)


def normalize_weight(p: WeightFunction, rule: QuadratureRule = DEFAULT_RULE) -> WeightFunction:
    """p / weight_total(p), with the ``normalized`` flag set."""
    total = weight_total(p, rule)
    if total <= DEGENERATE_WEIGHT_TOL:
        raise DegenerateWeightError(f"weight {p.id} has total mass {total!r}")
    if p.flags.normalized or abs(total - 1.0) <= NORMALIZED_TOL:
        return p if p.flags.normalized else replace(
            p, flags=replace(p.flags, normalized=True)
        )
    base = p.eval
    return WeightFunction(
        id=p.id,
        eval=lambda t: base(t) / total,
        flags=WeightFlags(**{**p.flags.__dict__, "normalized": True}),
        breakpoints=p.breakpoints,
        description=f"{p.description or p.id} / {total:.6g}",
    )
