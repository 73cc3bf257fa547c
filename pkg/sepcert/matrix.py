"""Dense complex matrix helpers and a Jacobi eigensolver for Hermitian matrices."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt

from sepcert.errors import DimensionMismatch, MatrixFormatError, NoConvergence, NotHermitian

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-9
MAX_DIM = 64
MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-13


@dataclass(frozen=True)
class HermitianSpectrum:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix
    sweeps: int = 0

    def reconstruct(self) -> ComplexMatrix:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_matrix(data) -> ComplexMatrix:
    """Copy anything array-like into a read-only 2-D complex128 array."""
    arr = np.array(data, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"Expected a 2-D matrix, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


def identity(n: int) -> ComplexMatrix:
    return as_matrix(np.eye(n))


def matrix_unit(n: int, i: int, j: int) -> ComplexMatrix:
    """The n x n matrix unit e_ij (0-based)."""
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return as_matrix(e)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; row index of (A⊗B) is i*rows(B) + k."""
    return as_matrix(np.kron(a, b))


def mul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"Cannot multiply {a.shape} by {b.shape}")
    return as_matrix(a @ b)


def add(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    if a.shape != b.shape:
        raise DimensionMismatch(f"Cannot add {a.shape} and {b.shape}")
    return as_matrix(a + b)


def scale(a: ComplexMatrix, c: complex) -> ComplexMatrix:
    return as_matrix(c * a)


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(a.conj().T)


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(a))


def frobenius_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a, "fro"))


def hermitian_deviation(a: ComplexMatrix) -> float:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"Expected a square matrix, got shape {a.shape}")
    if a.size == 0:
        return 0.0
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError("Matrix has non-finite entries")
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_deviation(a) <= tol


def require_hermitian(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> None:
    deviation = hermitian_deviation(a)
    if deviation > tol:
        raise NotHermitian(deviation, tol)


def hermitian_eigen(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> HermitianSpectrum:
    """
    Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation zeroes one off-diagonal pair (p, q). Sweeps stop when the
    off-diagonal Frobenius mass drops to 1e-13 * ||A||_F. Eigenvalues are
    returned in ascending order (stable for ties).

    Raises:
        NotHermitian: if max |A - A*| > tol
        NoConvergence: after MAX_SWEEPS sweeps
    """
    require_hermitian(a, tol)
    n = a.shape[0]
    if n > MAX_DIM:
        raise DimensionMismatch(f"Matrix dimension {n} exceeds the supported {MAX_DIM}")

    # Symmetrize so rounding in the input cannot leak into the rotations
    work = 0.5 * (np.array(a, dtype=np.complex128) + np.array(a, dtype=np.complex128).conj().T)
    vecs = np.eye(n, dtype=np.complex128)
    norm = float(np.linalg.norm(work, "fro"))
    threshold = OFF_DIAGONAL_RTOL * norm

    sweeps = 0
    off = _off_diagonal_norm(work)
    while off > threshold:
        if sweeps >= MAX_SWEEPS:
            raise NoConvergence(sweeps, off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(work, vecs, p, q)
        sweeps += 1
        off = _off_diagonal_norm(work)

    logger.debug("Jacobi converged for n=%d after %d sweeps (off=%.3e)", n, sweeps, off)

    values = work.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vecs = vecs[:, order]
    values.flags.writeable = False
    vecs.flags.writeable = False
    return HermitianSpectrum(eigenvalues=values, eigenvectors=vecs, sweeps=sweeps)


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(a.diagonal())
    return float(np.linalg.norm(off, "fro"))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply one complex Jacobi rotation in place, zeroing a[p, q]."""
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq / r
    app = a[p, p].real
    aqq = a[q, q].real

    # Real Jacobi on [[app, r], [r, aqq]], then undo the phase of a[p, q]
    theta = (aqq - app) / (2.0 * r)
    t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=np.complex128)

    idx = [p, q]
    a[:, idx] = a[:, idx] @ rot
    a[idx, :] = rot.conj().T @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ rot


def min_eigenvalue(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> float:
    return float(hermitian_eigen(a, tol).eigenvalues[0])


def negative_part_norm(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> float:
    """||A^-|| = max(0, -lambda_min(A)); zero for positive semidefinite A."""
    if a.shape[0] == 0:
        return 0.0
    return max(0.0, -min_eigenvalue(a, tol))


def positive_negative_parts(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """Split A = A+ - A- with A+, A- >= 0 and A+ A- = 0."""
    spectrum = hermitian_eigen(a, tol)
    u = spectrum.eigenvectors
    pos = np.clip(spectrum.eigenvalues, 0.0, None)
    neg = np.clip(-spectrum.eigenvalues, 0.0, None)
    a_plus = (u * pos) @ u.conj().T
    a_minus = (u * neg) @ u.conj().T
    return as_matrix(a_plus), as_matrix(a_minus)


def operator_norm(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> float:
    """Largest |eigenvalue| of a Hermitian matrix."""
    if a.shape[0] == 0:
        return 0.0
    values = hermitian_eigen(a, tol).eigenvalues
    return float(max(abs(values[0]), abs(values[-1])))


def is_psd(a: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    return min_eigenvalue(a, tol) >= -tol
