"""Loewner order, eigenvalue-wise order and weak majorization with margins."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from core.errors import DimensionMismatchError, LengthMismatchError
from core.linalg import HermitianMatrix, eigenvalues

logger = logging.getLogger(__name__)

TOL_ABS = 1e-9
TOL_REL = 1e-8


class OrderKind(str, Enum):
    LOEWNER = "loewner"
    EIGENWISE = "eigenwise"
    WEAK_MAJORIZATION = "weak-majorization"


@dataclass(frozen=True)
class Tolerances:
    tol_abs: float = TOL_ABS
    tol_rel: float = TOL_REL

    def allowance(self, scale: float) -> float:
        return self.tol_abs + self.tol_rel * scale

    def to_dict(self) -> dict:
        return {"tol_abs": self.tol_abs, "tol_rel": self.tol_rel}


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class OrderVerdict:
    """Certified comparison: ``margin`` is the most binding slack (negative = violated)."""

    kind: OrderKind
    holds: bool
    margin: float
    detail: tuple[float, ...]
    tol_abs: float
    tol_rel: float
    scale: float = 1.0
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind.value,
            "holds": self.holds,
            "margin": self.margin,
            "detail": list(self.detail),
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "scale": self.scale,
        }
        d.update(self.extra)
        return d


def _scale(*arrays) -> float:
    return max([1.0] + [float(np.max(np.abs(a))) for a in arrays if len(a)])


def _verdict(kind: OrderKind, detail: np.ndarray, scale: float,
             tol_abs: float, tol_rel: float, **extra) -> OrderVerdict:
    margin = float(np.min(detail))
    holds = margin >= -Tolerances(tol_abs, tol_rel).allowance(scale)
    return OrderVerdict(kind, holds, margin, tuple(float(x) for x in detail),
                        tol_abs, tol_rel, scale, extra)


def loewner_leq(a: HermitianMatrix, b: HermitianMatrix,
                tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> OrderVerdict:
    """A <= B iff B - A is positive semidefinite; detail lists eig(B - A) ascending."""
    diff = eigenvalues(b - a)[::-1]
    scale = _scale(eigenvalues(a), eigenvalues(b), diff)
    return _verdict(OrderKind.LOEWNER, diff, scale, tol_abs, tol_rel)


def eigen_leq(a: HermitianMatrix, b: HermitianMatrix,
              tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> OrderVerdict:
    """lambda_i(A) <= lambda_i(B) for every i, both spectra descending."""
    la, lb = eigenvalues(a), eigenvalues(b)
    if len(la) != len(lb):
        raise DimensionMismatchError(f"dimension mismatch: {len(la)} vs {len(lb)}")
    return _verdict(OrderKind.EIGENWISE, lb - la, _scale(la, lb), tol_abs, tol_rel,
                    lhs=[float(x) for x in la], rhs=[float(x) for x in lb])


def weak_majorize_vectors(u, v, tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> OrderVerdict:
    """u weakly majorized by v: top-k partial sums of u never exceed those of v."""
    u = np.sort(np.asarray(u, dtype=float))[::-1]
    v = np.sort(np.asarray(v, dtype=float))[::-1]
    if u.shape != v.shape:
        raise LengthMismatchError(f"length mismatch: {len(u)} vs {len(v)}")
    if u.size == 0:
        raise LengthMismatchError("cannot compare empty vectors")
    su, sv = np.cumsum(u), np.cumsum(v)
    return _verdict(OrderKind.WEAK_MAJORIZATION, sv - su, _scale(u, v), tol_abs, tol_rel,
                    lhs=[float(x) for x in u], rhs=[float(x) for x in v])


def weak_majorize(a: HermitianMatrix, b: HermitianMatrix,
                  tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> OrderVerdict:
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n} vs {b.n}")
    return weak_majorize_vectors(eigenvalues(a), eigenvalues(b), tol_abs, tol_rel)
