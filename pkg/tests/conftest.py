"""Shared fixtures and analytic reference values for matineq tests."""

import json
import math

import pytest

from core.linalg import HermitianMatrix

# --- Analytic reference values ---

# int_0^1 t^2 dt bracketed by f(1/2) and (f(0) + f(1))/2
HERMITE_HADAMARD_CHAIN = (0.25, 1.0 / 3.0, 0.5)

# f = (t - 1/2)^2, p = |t - 1/2|
NEGATIVE_CONTROL_INT_PF = 1.0 / 32.0
NEGATIVE_CONTROL_RHS = 1.0 / 48.0
NEGATIVE_CONTROL_SLACK = -1.0 / 96.0

# square along diag(t, 1 - t): midpoint diag(1/4, 1/4), integral diag(1/3, 1/3)
DIAGONAL_FEJER_SLACKS = (1.0 / 12.0, 1.0 / 6.0)

# exp along diag(t, 1 - t)
LOG_FEJER_LHS = 0.5
LOG_FEJER_RHS = math.log(math.e - 1.0)
EIG_PRODUCTS_LHS = (math.exp(0.5), math.e)
EIG_PRODUCTS_RHS = (math.e - 1.0, (math.e - 1.0) ** 2)

# max of x - x^2 on [0, 1]
MOND_PECARIC_BETA = 0.25

# --- Matrix records ---

DIAG_A_RECORD = {"n": 2, "re": [0.0, 0.0, 0.0, 1.0]}
DIAG_B_RECORD = {"n": 2, "re": [1.0, 0.0, 0.0, 0.0]}

COMPLEX_RECORD = {
    "n": 2,
    "re": [2.0, 1.0, 1.0, 3.0],
    "im": [0.0, -0.5, 0.5, 0.0],
}

NON_HERMITIAN_RECORD = {"n": 2, "re": [1.0, 2.0, 0.0, 1.0]}

FINDING_SPEC = {
    "theorem_id": "scalar-levin-steckin",
    "seed": 17,
    "function_id": "shiftsq",
    "weight_id": "vee",
    "perturbation": "drop-monotone-weight",
}


@pytest.fixture
def diag_pair():
    """A = diag(0, 1), B = diag(1, 0)."""
    return HermitianMatrix.diagonal([0.0, 1.0]), HermitianMatrix.diagonal([1.0, 0.0])


@pytest.fixture
def matrix_files(tmp_path):
    """a.json / b.json holding the diagonal pair."""
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(json.dumps(DIAG_A_RECORD))
    b.write_text(json.dumps(DIAG_B_RECORD))
    return a, b


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    """Keep sweeps and hunts on one worker unless a test says otherwise."""
    monkeypatch.setenv("MATINEQ_THREADS", "1")
