"""Dense Hermitian linear algebra.

Hermitian value type, cyclic-Jacobi spectral decomposition, functional
calculus f(A) = U diag(f(lambda)) U*, and the segment (1-t)A + tB.
All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from core.errors import (
    DimensionMismatchError,
    MalformedMatrixFileError,
    NoConvergenceError,
    NonSquareError,
    NotNumericallyHermitianError,
    NotPositiveDefiniteError,
    ParameterOutOfRangeError,
    SpectrumOutsideDomainError,
)

if TYPE_CHECKING:
    from core.funcspace import ScalarFunction

logger = logging.getLogger(__name__)

HERMITICITY_TOL = 1e-12
HERMITIZE_REJECT_TOL = 1e-8
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50
DOMAIN_SLACK = 1e-12
POSITIVITY_FLOOR = 1e-12


# ── Interval ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]; endpoints may be infinite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ParameterOutOfRangeError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def contains_interval(self, other: Interval, slack: float = 0.0) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def intersect(self, other: Interval) -> Interval:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ParameterOutOfRangeError(f"intervals {self} and {other} are disjoint")
        return Interval(lo, hi)

    def to_list(self) -> list[float]:
        return [self.lo, self.hi]


UNIT_INTERVAL = Interval(0.0, 1.0)


# ── Hermitian matrices ─────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """n x n complex Hermitian matrix (read-only storage)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NonSquareError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise NonSquareError("matrix dimension must be at least 1")
        asym = _max_abs(arr - arr.conj().T)
        if asym > HERMITICITY_TOL:
            raise NotNumericallyHermitianError(asym, HERMITICITY_TOL)
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def diagonal(cls, values) -> HermitianMatrix:
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def identity(cls, n: int) -> HermitianMatrix:
        return cls(np.eye(n))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def max_entry_diff(self, other: HermitianMatrix) -> float:
        _require_same_dimension(self, other)
        return _max_abs(self.entries - other.entries)

    def is_diagonal(self) -> bool:
        return not np.any(self.entries - np.diag(np.diag(self.entries)))

    def __add__(self, other: HermitianMatrix) -> HermitianMatrix:
        _require_same_dimension(self, other)
        return HermitianMatrix(self.entries + other.entries)

    def __sub__(self, other: HermitianMatrix) -> HermitianMatrix:
        _require_same_dimension(self, other)
        return HermitianMatrix(self.entries - other.entries)

    def __mul__(self, scalar: float) -> HermitianMatrix:
        return HermitianMatrix(float(scalar) * self.entries)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianMatrix(n={self.n})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues sorted descending and the matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def spectral_scale(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self, values=None) -> np.ndarray:
        """U diag(values) U*, with values defaulting to the eigenvalues."""
        lam = self.eigenvalues if values is None else np.asarray(values)
        u = self.eigenvectors
        return (u * lam) @ u.conj().T


def _max_abs(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def _require_same_dimension(a: HermitianMatrix, b: HermitianMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n} vs {b.n}")


def hermitize(m) -> HermitianMatrix:
    """Return (M + M*)/2, refusing matrices whose asymmetry exceeds 1e-8."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {arr.shape}")
    asym = _max_abs(arr - arr.conj().T)
    if asym > HERMITIZE_REJECT_TOL:
        raise NotNumericallyHermitianError(asym, HERMITIZE_REJECT_TOL)
    return HermitianMatrix(0.5 * (arr + arr.conj().T))


# ── Eigensolver ────────────────────────────────────────────────────────────

def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] in place with a complex Jacobi rotation."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
    g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    pair = [p, q]
    a[:, pair] = a[:, pair] @ g
    a[pair, :] = g.conj().T @ a[pair, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, pair] = v[:, pair] @ g


def eig_hermitian(matrix: HermitianMatrix) -> SpectralDecomposition:
    """Cyclic-Jacobi diagonalization, eigenpairs sorted descending (stable)."""
    a = np.array(matrix.entries, dtype=np.complex128)
    n = matrix.n
    v = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_REL_TOL * float(np.linalg.norm(a))
    # pairs below this cannot keep the off-diagonal norm above threshold
    negligible = threshold / n

    sweeps = 0
    off = _off_diagonal_norm(a)
    while off > threshold:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NoConvergenceError(off, sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > negligible:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _off_diagonal_norm(a)
    logger.debug("Jacobi converged: n=%d sweeps=%d off=%.2e", n, sweeps, off)

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    values = w[order]
    vectors = v[:, order]
    values.flags.writeable = False
    vectors.flags.writeable = False
    return SpectralDecomposition(values, vectors)


def eigenvalues(matrix: HermitianMatrix) -> np.ndarray:
    return eig_hermitian(matrix).eigenvalues


# ── Functional calculus ────────────────────────────────────────────────────

def apply_function(f: ScalarFunction, matrix: HermitianMatrix) -> HermitianMatrix:
    """f(A) = U diag(f(lambda_i)) U*, after checking the spectrum lies in domain(f)."""
    decomp = eig_hermitian(matrix)
    domain = f.domain
    # a lower end inside (0, DOMAIN_SLACK) stands for an open end at 0: no slack below it
    open_lo = 0.0 < domain.lo < DOMAIN_SLACK
    for lam in decomp.eigenvalues:
        outside = not domain.contains(float(lam), DOMAIN_SLACK) or (open_lo and lam < domain.lo)
        if outside:
            raise SpectrumOutsideDomainError(float(lam), domain, f.id)
    clipped = np.clip(decomp.eigenvalues, domain.lo, domain.hi)
    values = np.asarray(f.eval(clipped), dtype=float)
    return hermitize(decomp.reconstruct(values))


def matrix_log(matrix: HermitianMatrix) -> HermitianMatrix:
    """Natural logarithm of a positive definite matrix."""
    decomp = eig_hermitian(matrix)
    if decomp.lambda_min <= POSITIVITY_FLOOR:
        raise NotPositiveDefiniteError(decomp.lambda_min)
    return hermitize(decomp.reconstruct(np.log(decomp.eigenvalues)))


def convex_path(a: HermitianMatrix, b: HermitianMatrix, t: float) -> HermitianMatrix:
    """The segment point (1-t)A + tB."""
    _require_same_dimension(a, b)
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRangeError(f"path parameter t={t!r} outside [0, 1]")
    return HermitianMatrix((1.0 - t) * a.entries + t * b.entries)


def spectral_hull(*matrices: HermitianMatrix) -> Interval:
    """Smallest interval holding every eigenvalue of the given matrices."""
    lo, hi = math.inf, -math.inf
    for m in matrices:
        decomp = eig_hermitian(m)
        lo = min(lo, decomp.lambda_min)
        hi = max(hi, decomp.lambda_max)
    return Interval(lo, hi)


# ── Matrix JSON ────────────────────────────────────────────────────────────

def matrix_to_record(matrix: HermitianMatrix) -> dict:
    """Serialize as {"n", "re", "im"} with row-major entry lists."""
    flat = matrix.entries.reshape(-1)
    record = {"n": matrix.n, "re": [float(x) for x in flat.real]}
    if np.any(flat.imag):
        record["im"] = [float(x) for x in flat.imag]
    return record


def matrix_from_record(record: dict) -> HermitianMatrix:
    """Inverse of matrix_to_record; a missing "im" means a real matrix."""
    if not isinstance(record, dict):
        raise MalformedMatrixFileError("matrix record must be a JSON object")
    try:
        n = int(record["n"])
        re = np.asarray(record["re"], dtype=float)
        im = np.asarray(record.get("im", np.zeros(n * n)), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedMatrixFileError(f"bad matrix record: {e}") from e
    if n < 1 or re.shape != (n * n,) or im.shape != (n * n,):
        raise MalformedMatrixFileError(
            f"matrix record with n={n} needs {n * n} entries in 're' and 'im'"
        )
    return hermitize((re + 1j * im).reshape(n, n))
