"""Exception types raised by sepcert operations."""


class SepCertError(ValueError):
    """Base class for all sepcert errors."""


class NotHermitian(SepCertError):
    """Matrix fails the entrywise Hermitian predicate."""

    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"Matrix is not Hermitian: max |A - A*| = {deviation:.3e} > tol {tol:.1e}")


class NoConvergence(SepCertError):
    """Jacobi iteration hit its sweep cap."""

    def __init__(self, sweeps: int, off_norm: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(f"Eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_norm:.3e})")


class DimensionMismatch(SepCertError):
    pass


class DimensionTooSmall(SepCertError):
    pass


class NotAState(SepCertError):
    pass


class NotUnital(SepCertError):
    pass


class TOutOfRange(SepCertError):
    pass


class EpsilonOutOfRange(SepCertError):
    pass


class DeltaSearchFailed(SepCertError):
    pass


class MatrixFormatError(SepCertError):
    """JSON payload could not be turned into a matrix, operator or map."""
