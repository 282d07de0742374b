"""Exception hierarchy for matineq.

Numeric layers raise these; the check layer turns them into ``error``
verdicts and the CLI turns resolution failures into exit code 4.
"""


class MatineqError(Exception):
    """Base class for every error raised by matineq."""


class NonSquareError(MatineqError, ValueError):
    pass


class NotNumericallyHermitianError(MatineqError, ValueError):
    def __init__(self, asymmetry: float, threshold: float) -> None:
        super().__init__(
            f"matrix is not Hermitian: max |M - M*| = {asymmetry:.3e} > {threshold:.1e}"
        )
        self.asymmetry = asymmetry


class NoConvergenceError(MatineqError):
    def __init__(self, residual: float, sweeps: int) -> None:
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal mass {residual:.3e})"
        )
        self.residual = residual
        self.sweeps = sweeps


class SpectrumOutsideDomainError(MatineqError, ValueError):
    def __init__(self, eigenvalue: float, domain, function_id: str = "") -> None:
        super().__init__(
            f"eigenvalue {eigenvalue!r} outside domain [{domain.lo}, {domain.hi}]"
            + (f" of {function_id}" if function_id else "")
        )
        self.eigenvalue = eigenvalue
        self.domain = domain


class NotPositiveDefiniteError(MatineqError, ValueError):
    def __init__(self, min_eigenvalue: float) -> None:
        super().__init__(f"matrix is not positive definite (lambda_min = {min_eigenvalue!r})")
        self.min_eigenvalue = min_eigenvalue


class DimensionMismatchError(MatineqError, ValueError):
    pass


class ParameterOutOfRangeError(MatineqError, ValueError):
    pass


class DomainMismatchError(MatineqError, ValueError):
    pass


class NonPositiveFunctionError(MatineqError, ValueError):
    pass


class DegenerateIntervalError(MatineqError, ValueError):
    pass


class NonFiniteSampleError(MatineqError, ArithmeticError):
    def __init__(self, node: float) -> None:
        super().__init__(f"integrand is not finite at t = {node!r}")
        self.node = node


class DegenerateWeightError(MatineqError, ValueError):
    pass


class LengthMismatchError(MatineqError, ValueError):
    pass


class UnknownIdError(MatineqError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown id"


class MalformedMatrixFileError(MatineqError, ValueError):
    pass


class GenerationError(MatineqError):
    pass


class MalformedRecordError(MatineqError, ValueError):
    pass
