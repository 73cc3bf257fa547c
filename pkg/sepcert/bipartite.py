"""Operators on M_n ⊗ M_n: S/T functionals, the flip, the twirl and separability checks."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from sepcert.errors import DimensionMismatch, DimensionTooSmall, NotAState
from sepcert.matrix import (
    HERMITIAN_TOL, ComplexMatrix, as_matrix, hermitian_deviation, is_psd, kron, min_eigenvalue,
)
from sepcert.sampling import chunked_mean, make_rng, simplex_weights
from sepcert.schema import SeparabilityReport, Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BipartiteOperator:
    """
    An element a of M_n ⊗ M_n stored as its n² x n² matrix.

    The coefficient a_(ij)(kl) of e_ij ⊗ e_kl sits at mat[i*n + k, j*n + l].
    """

    n: int
    mat: ComplexMatrix

    def __post_init__(self):
        mat = as_matrix(self.mat)
        size = self.n * self.n
        if self.n < 1 or mat.shape != (size, size):
            raise DimensionMismatch(f"local_dim {self.n} needs a {size}x{size} matrix, got {mat.shape}")
        object.__setattr__(self, "mat", mat)

    def coefficient(self, i: int, j: int, k: int, l: int) -> complex:
        return complex(self.mat[i * self.n + k, j * self.n + l])

    def tensor(self) -> np.ndarray:
        """View as a 4-index array t[i, k, j, l] = a_(ij)(kl)."""
        n = self.n
        return self.mat.reshape(n, n, n, n)

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def __add__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _same_dim(self, other)
        return BipartiteOperator(self.n, self.mat + other.mat)

    def __sub__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _same_dim(self, other)
        return BipartiteOperator(self.n, self.mat - other.mat)

    def __mul__(self, c: complex) -> "BipartiteOperator":
        return BipartiteOperator(self.n, c * self.mat)

    __rmul__ = __mul__


@dataclass(frozen=True)
class WernerForm:
    """alpha·1⊗1 + beta·V, the fixed points of the U⊗U twirl."""

    alpha: complex
    beta: complex

    def reconstruct(self, n: int) -> BipartiteOperator:
        return werner_operator(n, self.alpha, self.beta)


def _same_dim(a: BipartiteOperator, b: BipartiteOperator) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"Local dimensions differ: {a.n} vs {b.n}")


def s_functional(a: BipartiteOperator) -> complex:
    """S(a) = sum_ij a_(ij)(ij)."""
    t = a.tensor()
    return complex(np.einsum("iijj->", t))


def t_functional(a: BipartiteOperator) -> complex:
    """T(a) = sum_ij a_(ij)(ji)."""
    t = a.tensor()
    return complex(np.einsum("ijji->", t))


def flip(n: int) -> BipartiteOperator:
    """V = sum e_ij ⊗ e_ji, the swap x⊗y -> y⊗x."""
    v = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            v[i * n + j, j * n + i] = 1.0
    return BipartiteOperator(n, v)


def unit(n: int) -> BipartiteOperator:
    return BipartiteOperator(n, np.eye(n * n))


def werner_operator(n: int, alpha: complex, beta: complex) -> BipartiteOperator:
    return BipartiteOperator(n, alpha * np.eye(n * n) + beta * flip(n).mat)


def max_entangled(n: int) -> BipartiteOperator:
    """ê = (1/n) sum e_ij ⊗ e_ij, the rank-one projection onto sum ξ_i⊗ξ_i / sqrt(n)."""
    e = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            e[i * n + i, j * n + j] = 1.0 / n
    return BipartiteOperator(n, e)


def product_state(b: ComplexMatrix, c: ComplexMatrix) -> BipartiteOperator:
    if b.shape != c.shape:
        raise DimensionMismatch(f"Factors must share a shape, got {b.shape} and {c.shape}")
    return BipartiteOperator(b.shape[0], kron(b, c))


def max_entangled_fidelity(a: BipartiteOperator) -> complex:
    """Tr(a ê); for any a, S(a) = n · Tr(a ê)."""
    return complex(np.trace(a.mat @ max_entangled(a.n).mat))


def partial_transpose(a: BipartiteOperator) -> BipartiteOperator:
    """Transpose the second factor: a_(ij)(kl) -> a_(ij)(lk)."""
    n = a.n
    t = a.tensor().transpose(0, 3, 2, 1)
    return BipartiteOperator(n, t.reshape(n * n, n * n))


def ppt_check(a: BipartiteOperator, tol: float = HERMITIAN_TOL) -> bool:
    return is_psd(partial_transpose(a).mat, tol)


def is_density(a: BipartiteOperator, tol: float = HERMITIAN_TOL) -> bool:
    if hermitian_deviation(a.mat) > tol:
        return False
    if abs(a.trace() - 1.0) > tol:
        return False
    return min_eigenvalue(a.mat, tol) >= -tol


def require_density(a: BipartiteOperator, tol: float = HERMITIAN_TOL) -> None:
    deviation = hermitian_deviation(a.mat)
    if deviation > tol:
        raise NotAState(f"Operator is not Hermitian (deviation {deviation:.3e})")
    tr = a.trace()
    if abs(tr - 1.0) > tol:
        raise NotAState(f"Trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    lam = min_eigenvalue(a.mat, tol)
    if lam < -tol:
        raise NotAState(f"Operator has negative eigenvalue {lam:.3e}")


def twirl(a: BipartiteOperator) -> WernerForm:
    """
    Closed-form Haar average P(a) = ∫ (U⊗U)* a (U⊗U) dU = alpha·1⊗1 + beta·V.

    Solves alpha n² + beta n = Tr(a), alpha n + beta n² = T(a).
    """
    n = a.n
    if n < 2:
        raise DimensionTooSmall("The twirl needs local dimension n >= 2 (1⊗1 and V coincide for n = 1)")
    tr = a.trace()
    t = t_functional(a)
    denom = n * (n * n - 1)
    alpha = (n * tr - t) / denom
    beta = (n * t - tr) / denom
    return WernerForm(alpha=alpha, beta=beta)


def twirl_operator(a: BipartiteOperator) -> BipartiteOperator:
    return twirl(a).reconstruct(a.n)


def haar_random_unitaries(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """
    Stack of Haar-random unitaries: QR of a complex Ginibre matrix with the
    phases of diag(R) moved into Q.
    """
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[:, None, :]


def haar_random_unitary(n: int, seed: int) -> ComplexMatrix:
    return as_matrix(haar_random_unitaries(make_rng(seed), 1, n)[0])


def _local_conjugation_sum(a: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    count, n, _ = unitaries.shape
    w = np.einsum("bij,bkl->bikjl", unitaries, unitaries).reshape(count, n * n, n * n)
    conj = np.conj(np.transpose(w, (0, 2, 1))) @ a @ w
    return conj.sum(axis=0)


def twirl_monte_carlo(a: BipartiteOperator, samples: int, seed: int, threads: int = 1) -> BipartiteOperator:
    """Empirical mean of (U⊗U)* a (U⊗U) over Haar-random U; deterministic per seed."""
    n = a.n
    mat = np.asarray(a.mat)

    def chunk(rng: np.random.Generator, count: int) -> np.ndarray:
        return _local_conjugation_sum(mat, haar_random_unitaries(rng, count, n))

    mean = chunked_mean(chunk, samples, seed, threads)
    return BipartiteOperator(n, mean)


def random_psd(rng: np.random.Generator, n: int, rank: Optional[int] = None) -> np.ndarray:
    """Unit-trace Wishart matrix G G* / Tr(G G*)."""
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return w / np.trace(w).real


def random_density(n: int, seed: int) -> BipartiteOperator:
    return BipartiteOperator(n, random_psd(make_rng(seed), n * n))


def random_separable_density(rng: np.random.Generator, n: int, terms: Optional[int] = None) -> BipartiteOperator:
    """Simplex-weighted mixture of products of Wishart factors (at most 2n² terms)."""
    if terms is None:
        terms = int(rng.integers(1, 2 * n * n + 1))
    weights = simplex_weights(rng, terms)
    acc = np.zeros((n * n, n * n), dtype=np.complex128)
    for w in weights:
        acc += w * np.kron(random_psd(rng, n), random_psd(rng, n))
    return BipartiteOperator(n, acc)


def necessary_separability_check(a: BipartiteOperator, tol: float = HERMITIAN_TOL) -> SeparabilityReport:
    """
    Separable densities have 0 <= S(a), T(a) <= 1. A value outside that band
    certifies entanglement; otherwise the test says nothing.
    """
    require_density(a, tol)
    s = s_functional(a).real
    t = t_functional(a).real
    outside = [v for v in (s, t) if v < -tol or v > 1.0 + tol]
    verdict = Verdict.ENTANGLED if outside else Verdict.INCONCLUSIVE
    return SeparabilityReport(S=s, T=t, ppt=ppt_check(a, tol), verdict=verdict)


def werner_separability(a: BipartiteOperator, tol: float = HERMITIAN_TOL) -> Verdict:
    """
    Classify the twirled state P(a) from T(a) = T(P(a)).

    T < 0 is entangled by the S/T bound; T > 1/n is separable (the Werner
    criterion holds where nT - 1 > 0). The band [0, 1/n] is left open.
    """
    require_density(a, tol)
    if a.n < 2:
        raise DimensionTooSmall("Werner classification needs n >= 2")
    t = t_functional(a).real
    if t < -tol:
        return Verdict.ENTANGLED
    if t > 1.0 / a.n + tol:
        return Verdict.SEPARABLE
    return Verdict.INCONCLUSIVE
