"""Linear maps M_n -> M_m, their Choi matrices and the super-positivity results."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from sepcert.bipartite import BipartiteOperator, partial_transpose
from sepcert.errors import DimensionMismatch, DimensionTooSmall
from sepcert.matrix import HERMITIAN_TOL, ComplexMatrix, as_matrix, is_psd
from sepcert.sampling import make_rng
from sepcert.schema import MapVariant, PositivityVerdict, SuperPositivityReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatrixMap:
    """
    A linear map phi: M_n -> M_m given by its matrix-unit images.

    images[i*n + j] = phi(e_ij), each an m x m matrix.
    """

    n: int
    m: int
    images: Tuple[ComplexMatrix, ...]

    def __post_init__(self):
        images = tuple(as_matrix(img) for img in self.images)
        if len(images) != self.n * self.n:
            raise DimensionMismatch(f"Map on M_{self.n} needs {self.n * self.n} images, got {len(images)}")
        for img in images:
            if img.shape != (self.m, self.m):
                raise DimensionMismatch(f"Images must be {self.m}x{self.m}, got {img.shape}")
        object.__setattr__(self, "images", images)

    def image(self, i: int, j: int) -> ComplexMatrix:
        return self.images[i * self.n + j]

    def stacked(self) -> np.ndarray:
        return np.stack(self.images)

    def __call__(self, x: ComplexMatrix) -> ComplexMatrix:
        return apply(self, x)

    def __add__(self, other: "MatrixMap") -> "MatrixMap":
        return add(self, other)

    def __sub__(self, other: "MatrixMap") -> "MatrixMap":
        return add(self, scale(other, -1.0))

    def __mul__(self, c: complex) -> "MatrixMap":
        return scale(self, c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ChoiMatrix:
    """C_phi = sum e_ij ⊗ phi(e_ij) in M_n ⊗ M_m."""

    n: int
    m: int
    mat: ComplexMatrix

    def __post_init__(self):
        mat = as_matrix(self.mat)
        size = self.n * self.m
        if mat.shape != (size, size):
            raise DimensionMismatch(f"Choi matrix for dims ({self.n}, {self.m}) must be {size}x{size}")
        object.__setattr__(self, "mat", mat)

    def as_bipartite(self) -> BipartiteOperator:
        if self.n != self.m:
            raise DimensionMismatch(f"Choi matrix has unequal local dims ({self.n}, {self.m})")
        return BipartiteOperator(self.n, self.mat)


def _from_stack(n: int, m: int, stack: np.ndarray) -> MatrixMap:
    return MatrixMap(n=n, m=m, images=tuple(stack))


def apply(phi: MatrixMap, x: ComplexMatrix) -> ComplexMatrix:
    """phi(x) = sum x_ij phi(e_ij)."""
    x = np.asarray(x)
    if x.shape != (phi.n, phi.n):
        raise DimensionMismatch(f"Map acts on {phi.n}x{phi.n} matrices, got {x.shape}")
    return as_matrix(np.tensordot(x.reshape(-1), phi.stacked(), axes=1))


def compose(phi: MatrixMap, psi: MatrixMap) -> MatrixMap:
    """(phi ∘ psi)(x) = phi(psi(x))."""
    if psi.m != phi.n:
        raise DimensionMismatch(f"Cannot compose M_{phi.n}->M_{phi.m} after M_{psi.n}->M_{psi.m}")
    return MatrixMap(psi.n, phi.m, tuple(apply(phi, img) for img in psi.images))


def add(phi: MatrixMap, psi: MatrixMap) -> MatrixMap:
    if (phi.n, phi.m) != (psi.n, psi.m):
        raise DimensionMismatch(f"Cannot add maps of dims ({phi.n}, {phi.m}) and ({psi.n}, {psi.m})")
    return _from_stack(phi.n, phi.m, phi.stacked() + psi.stacked())


def scale(phi: MatrixMap, c: complex) -> MatrixMap:
    return _from_stack(phi.n, phi.m, c * phi.stacked())


def choi(phi: MatrixMap) -> ChoiMatrix:
    n, m = phi.n, phi.m
    blocks = phi.stacked().reshape(n, n, m, m)
    mat = blocks.transpose(0, 2, 1, 3).reshape(n * m, n * m)
    return ChoiMatrix(n, m, mat)


def map_from_choi(c: ChoiMatrix) -> MatrixMap:
    n, m = c.n, c.m
    blocks = np.asarray(c.mat).reshape(n, m, n, m).transpose(0, 2, 1, 3)
    return _from_stack(n, m, blocks.reshape(n * n, m, m))


def trace_map(n: int) -> MatrixMap:
    """x -> Tr(x)·1."""
    stack = np.zeros((n * n, n, n), dtype=np.complex128)
    for i in range(n):
        stack[i * n + i] = np.eye(n)
    return _from_stack(n, n, stack)


unit_map = trace_map


def identity_map(n: int) -> MatrixMap:
    stack = np.zeros((n * n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            stack[i * n + j, i, j] = 1.0
    return _from_stack(n, n, stack)


def transpose_map(n: int) -> MatrixMap:
    stack = np.zeros((n * n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            stack[i * n + j, j, i] = 1.0
    return _from_stack(n, n, stack)


def ad(v: ComplexMatrix) -> MatrixMap:
    """Ad V: x -> V* x V, mapping M_n to M_m for an n x m matrix V."""
    v = np.asarray(v, dtype=np.complex128)
    n, m = v.shape
    vh = v.conj().T
    stack = np.einsum("ai,jb->ijab", vh, v).reshape(n * n, m, m)
    return _from_stack(n, m, stack)


def trace_plus(c: float, phi: MatrixMap) -> MatrixMap:
    """c·Tr + phi."""
    if phi.n != phi.m:
        raise DimensionMismatch("c·Tr + phi needs a map of M_n into itself")
    return add(scale(trace_map(phi.n), c), phi)


def unital_scalar(phi: MatrixMap, tol: float = 1e-9) -> Optional[float]:
    """Return lambda if phi(1) = lambda·1 within tol (Frobenius), else None."""
    if phi.n != phi.m:
        return None
    one = apply(phi, np.eye(phi.n))
    lam = np.trace(one).real / phi.m
    if abs(np.trace(one).imag) > tol:
        return None
    if np.linalg.norm(one - lam * np.eye(phi.m)) > tol:
        return None
    return float(lam)


def is_unital(phi: MatrixMap, tol: float = 1e-9) -> bool:
    """||phi(1) - 1||_F <= tol."""
    if phi.n != phi.m:
        return False
    one = apply(phi, np.eye(phi.n))
    return float(np.linalg.norm(one - np.eye(phi.m))) <= tol


def is_hermiticity_preserving(phi: MatrixMap, tol: float = 1e-10) -> bool:
    n = phi.n
    for i in range(n):
        for j in range(i, n):
            if np.max(np.abs(phi.image(i, j) - phi.image(j, i).conj().T), initial=0.0) > tol:
                return False
    return True


def is_completely_positive(phi: MatrixMap, tol: float = HERMITIAN_TOL) -> bool:
    return is_psd(choi(phi).mat, tol)


def dual_pairing(psi: MatrixMap, phi: MatrixMap) -> float:
    """
    Tr(C_psi C_phi) for hermiticity-preserving psi, phi.

    A negative value against a positive phi shows psi is not super-positive.
    """
    if (psi.n, psi.m) != (phi.n, phi.m):
        raise DimensionMismatch(f"Maps have dims ({psi.n}, {psi.m}) and ({phi.n}, {phi.m})")
    c_psi = choi(psi).mat
    c_phi = choi(phi).mat
    return float(np.einsum("ij,ji->", c_psi, c_phi).real)


def super_positive_threshold_verdict(c: float, n: int, variant: MapVariant = MapVariant.TRANSPOSE) -> SuperPositivityReport:
    """
    c·Tr + t (and c·Tr + ι) is super-positive exactly when c >= 1.

    The witness is the pairing against the positive map Tr - ι (or Tr - t for
    the transpose variant); both equal (c - 1)(n² - n).
    """
    if n < 2:
        raise DimensionTooSmall("Super-positivity threshold needs n >= 2")
    variant = MapVariant(variant)
    base = transpose_map(n) if variant == MapVariant.TRANSPOSE else identity_map(n)
    witness = dual_pairing(trace_plus(c, base), trace_plus(1.0, scale(base, -1.0)))
    verdict = PositivityVerdict.SUPER_POSITIVE if c >= 1.0 else PositivityVerdict.NOT_SUPER_POSITIVE
    return SuperPositivityReport(c=c, n=n, variant=variant, verdict=verdict, witness=witness)


def unit_trace_plus(phi: MatrixMap) -> MatrixMap:
    """x -> phi(1)Tr(x) + phi(x); super-positive whenever phi is positive."""
    if phi.n != phi.m:
        raise DimensionMismatch("phi(1)Tr + phi needs a map of M_n into itself")
    one = apply(phi, np.eye(phi.n))
    stack = phi.stacked().copy()
    for i in range(phi.n):
        stack[i * phi.n + i] += one
    return _from_stack(phi.n, phi.m, stack)


def super_positivity_consequences(phi: MatrixMap, tol: float = HERMITIAN_TOL) -> Tuple[bool, bool]:
    """(Choi PSD, Choi PPT): the checkable necessary conditions for super-positivity."""
    c = choi(phi)
    psd = is_psd(c.mat, tol)
    ppt = psd and is_psd(partial_transpose(c.as_bipartite()).mat, tol)
    return psd, ppt


def random_cp_map(n: int, terms: int, seed: int) -> MatrixMap:
    """Sum of Ad(V_k) with complex Gaussian V_k."""
    rng = make_rng(seed)
    total = None
    for _ in range(terms):
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        term = ad(v)
        total = term if total is None else add(total, term)
    return total


def random_unital_hermitian_map(n: int, seed: int) -> MatrixMap:
    """
    Random hermiticity-preserving unital map on M_n.

    Start from a random Hermitian Choi matrix C and subtract
    (1/n)·1 ⊗ (Tr_1(C) - 1) so that phi(1) = Tr_1(C) = 1.
    """
    rng = make_rng(seed)
    g = rng.standard_normal((n * n, n * n)) + 1j * rng.standard_normal((n * n, n * n))
    h = 0.5 * (g + g.conj().T) / n
    partial = np.einsum("iaib->ab", h.reshape(n, n, n, n))
    h = h - np.kron(np.eye(n), partial - np.eye(n)) / n
    return map_from_choi(ChoiMatrix(n, n, h))
