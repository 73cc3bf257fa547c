"""Structural physical approximation of a unital map and its entanglement certificate."""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from sepcert.bipartite import BipartiteOperator, ppt_check, s_functional, t_functional
from sepcert.choi import MatrixMap, choi, is_unital, scale, unital_scalar
from sepcert.errors import NotUnital, TOutOfRange
from sepcert.matrix import HERMITIAN_TOL, ComplexMatrix, as_matrix, negative_part_norm
from sepcert.schema import CertificateReport, SpaSummary, Verdict

logger = logging.getLogger(__name__)

UNITAL_TOL = 1e-9


@dataclass(frozen=True)
class SpaResult:
    t_star: float
    spa_state: BipartiteOperator
    neg_norm: float
    normalized_by: float = 1.0

    def summary(self) -> SpaSummary:
        return SpaSummary(
            t_star=self.t_star,
            neg_norm=self.neg_norm,
            spa_trace=self.spa_state.trace().real,
            normalized_by=self.normalized_by,
        )


def unitalize(phi: MatrixMap, allow_normalize: bool = False, tol: float = UNITAL_TOL) -> Tuple[MatrixMap, float]:
    """
    Return (psi, lam) with psi unital and phi = lam·psi.

    A map with phi(1) = lam·1, lam > 0, is rescaled only when allow_normalize
    is set; anything else raises NotUnital.
    """
    if is_unital(phi, tol):
        return phi, 1.0
    lam = unital_scalar(phi, tol)
    if allow_normalize and lam is not None and lam > 0.0:
        logger.warning("Map is scalar-unital with phi(1) = %.12g·1; normalizing", lam)
        return scale(phi, 1.0 / lam), lam
    if lam is not None and lam > 0.0:
        raise NotUnital(f"phi(1) = {lam:.12g}·1; pass allow_normalize to rescale")
    raise NotUnital("phi(1) is not a positive multiple of the identity")


def _require_unital(phi: MatrixMap, tol: float = UNITAL_TOL) -> None:
    if not is_unital(phi, tol):
        raise NotUnital("Map is not unital: ||phi(1) - 1||_F exceeds tolerance")


def w_tilde(phi: MatrixMap, t: float) -> ComplexMatrix:
    """W~(t) = (1 - t)/n² · 1⊗1 + t·W with W = C_phi / n; trace 1."""
    _require_unital(phi)
    if not 0.0 <= t <= 1.0:
        raise TOutOfRange(f"t must lie in [0, 1], got {t}")
    n = phi.n
    w = np.asarray(choi(phi).mat) / n
    return as_matrix((1.0 - t) / (n * n) * np.eye(n * n) + t * w)


def t_star(phi: MatrixMap, tol: float = HERMITIAN_TOL) -> float:
    """Largest t in [0, 1] with W~(t) >= 0: t* = 1 / (1 + n²·||W^-||)."""
    _require_unital(phi)
    n = phi.n
    w_neg = negative_part_norm(np.asarray(choi(phi).mat) / n, tol)
    return 1.0 / (1.0 + n * n * w_neg)


def spa_from_choi_closed_form(c: ComplexMatrix, n: int, neg_norm: float) -> ComplexMatrix:
    """(||C^-||·1⊗1 + C) / (n + n²·||C^-||)."""
    return as_matrix((neg_norm * np.eye(n * n) + np.asarray(c)) / (n + n * n * neg_norm))


def spa(phi: MatrixMap, allow_normalize: bool = False, tol: float = HERMITIAN_TOL) -> SpaResult:
    psi, lam = unitalize(phi, allow_normalize)
    n = psi.n
    c = choi(psi).mat
    neg = negative_part_norm(c, tol)
    state = BipartiteOperator(n, spa_from_choi_closed_form(c, n, neg))
    ts = 1.0 / (1.0 + n * neg)
    logger.debug("SPA: n=%d ||C^-||=%.12g t*=%.12g", n, neg, ts)
    return SpaResult(t_star=ts, spa_state=state, neg_norm=neg, normalized_by=lam)


def spa_variational(phi: MatrixMap, tol: float = HERMITIAN_TOL) -> BipartiteOperator:
    """The same state reached through W~(t*)."""
    return BipartiteOperator(phi.n, w_tilde(phi, t_star(phi, tol)))


def trace_mixture_applies(result: SpaResult) -> bool:
    """
    True when ||C^-|| >= 1. For a positive unital phi the SPA is then a
    mixture of 1⊗1 with the Choi matrix of Tr + phi, which is separable.
    Positivity of phi is not checked here.
    """
    return result.neg_norm >= 1.0 - UNITAL_TOL


def spa_separability_hint(phi: MatrixMap, allow_normalize: bool = False, tol: float = HERMITIAN_TOL) -> bool:
    return trace_mixture_applies(spa(phi, allow_normalize, tol))


def cross_check(state: BipartiteOperator, tol: float = HERMITIAN_TOL) -> List[str]:
    """Names of the necessary separability conditions the state violates."""
    failed = []
    s = s_functional(state).real
    t = t_functional(state).real
    if s < -tol or s > 1.0 + tol:
        failed.append("S_bound")
    if t < -tol or t > 1.0 + tol:
        failed.append("T_bound")
    if not ppt_check(state, tol):
        failed.append("ppt")
    return failed


def spa_entanglement_certificate(phi: MatrixMap, tol: float = HERMITIAN_TOL,
                                 allow_normalize: bool = False) -> CertificateReport:
    """
    If SPA(phi) were separable then S(C_phi), T(C_phi) <= n + n(n-1)·||C_phi^-||.
    Exceeding that bound by more than tol certifies entanglement; everything
    else is Inconclusive.
    """
    result = spa(phi, allow_normalize, tol)
    psi = scale(phi, 1.0 / result.normalized_by) if result.normalized_by != 1.0 else phi
    n = psi.n
    c = choi(psi).as_bipartite()
    s = s_functional(c).real
    t = t_functional(c).real
    bound = n + n * (n - 1) * result.neg_norm
    margin = max(s, t) - bound
    verdict = Verdict.ENTANGLED if margin > tol else Verdict.INCONCLUSIVE
    failed = cross_check(result.spa_state, tol) if verdict == Verdict.ENTANGLED else []
    if verdict == Verdict.ENTANGLED and not ({"S_bound", "T_bound"} & set(failed)):
        logger.warning("Certificate fired but SPA passes the S/T bounds (margin %.3e)", margin)
    return CertificateReport(S=s, T=t, neg_norm=result.neg_norm, bound=bound, margin=margin,
                             verdict=verdict, failed_conditions=failed)
