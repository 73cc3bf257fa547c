"""The generalized Choi maps phi(a, b, c, theta) on M_3 and the optimal-map counterexample.

phi(a,b,c,theta)(x) has diagonal rows (a,b,c), (c,a,b), (b,c,a) acting on
(x11, x22, x33) and off-diagonal entries -e^{±i theta} x_ij. Its Choi matrix
is diagonal except for the 3x3 circulant block P(a, theta) on rows {0, 4, 8}.
"""

import logging
import math
from typing import List, Tuple

import numpy as np

from sepcert.bipartite import s_functional, t_functional
from sepcert.choi import ChoiMatrix, MatrixMap, choi, scale
from sepcert.errors import DeltaSearchFailed, DimensionMismatch, EpsilonOutOfRange
from sepcert.matrix import ComplexMatrix, as_matrix, negative_part_norm, operator_norm
from sepcert.sampling import chunked_map, random_unit_vectors
from sepcert.schema import (
    ChainEntry, ChainVerdict, CounterexampleReport, HaKyeParams, PositivityProbe, Verdict,
)
from sepcert.spa import spa, spa_entanglement_certificate

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-10
OPTIMAL_TOL = 1e-12
CHAIN_TOL = 1e-12
DELTA_WIDTH = 1e-6
DELTA_RELATIVE_WIDTH = 1e-3
P_ALL_ONES = np.ones((3, 3), dtype=np.complex128)
# rows/cols of the Choi matrix carrying P(a, theta)
P_BLOCK = [0, 4, 8]


def apply_map(p: HaKyeParams, x: ComplexMatrix) -> ComplexMatrix:
    x = np.asarray(x)
    if x.shape != (3, 3):
        raise DimensionMismatch(f"phi(a,b,c,theta) acts on 3x3 matrices, got {x.shape}")
    a, b, c = p.a, p.b, p.c
    up = -np.exp(1j * p.theta)
    down = -np.exp(-1j * p.theta)
    out = np.empty((3, 3), dtype=np.complex128)
    out[0, 0] = a * x[0, 0] + b * x[1, 1] + c * x[2, 2]
    out[1, 1] = c * x[0, 0] + a * x[1, 1] + b * x[2, 2]
    out[2, 2] = b * x[0, 0] + c * x[1, 1] + a * x[2, 2]
    out[0, 1] = up * x[0, 1]
    out[0, 2] = down * x[0, 2]
    out[1, 0] = down * x[1, 0]
    out[1, 2] = up * x[1, 2]
    out[2, 0] = up * x[2, 0]
    out[2, 1] = down * x[2, 1]
    return as_matrix(out)


def ha_kye_map(p: HaKyeParams) -> MatrixMap:
    images = []
    for i in range(3):
        for j in range(3):
            e = np.zeros((3, 3), dtype=np.complex128)
            e[i, j] = 1.0
            images.append(apply_map(p, e))
    return MatrixMap(n=3, m=3, images=tuple(images))


def choi9(p: HaKyeParams) -> ChoiMatrix:
    """The 9x9 Choi matrix written out entry by entry."""
    up = -np.exp(1j * p.theta)
    down = -np.exp(-1j * p.theta)
    c9 = np.zeros((9, 9), dtype=np.complex128)
    c9[P_BLOCK, P_BLOCK] = p.a
    for idx in (1, 5, 6):
        c9[idx, idx] = p.c
    for idx in (2, 3, 7):
        c9[idx, idx] = p.b
    c9[0, 4] = up
    c9[0, 8] = down
    c9[4, 0] = down
    c9[4, 8] = up
    c9[8, 0] = up
    c9[8, 4] = down
    return ChoiMatrix(3, 3, c9)


def p_submatrix(a: float, theta: float) -> ComplexMatrix:
    up = -np.exp(1j * theta)
    down = -np.exp(-1j * theta)
    return as_matrix([
        [a, up, down],
        [down, a, up],
        [up, down, a],
    ])


def p_theta(theta: float) -> float:
    """max_k 2cos(theta + 2πk/3): P(a, theta) >= 0 iff a >= p_theta."""
    return max(2.0 * math.cos(theta + 2.0 * math.pi * k / 3.0) for k in range(3))


def p_theta_printed(theta: float) -> float:
    """max{2cos(theta - π/3), 2cos(theta), 2cos(theta + π/3)}, kept for comparison only."""
    return max(2.0 * math.cos(theta + shift) for shift in (-math.pi / 3.0, 0.0, math.pi / 3.0))


def is_positive(p: HaKyeParams) -> bool:
    """a + b + c >= p_theta, and a <= 1 implies bc >= (1 - a)²."""
    if p.a + p.b + p.c < p_theta(p.theta):
        return False
    if p.a <= 1.0 and p.b * p.c < (1.0 - p.a) ** 2:
        return False
    return True


def is_optimal_sufficient(p: HaKyeParams, tol: float = OPTIMAL_TOL) -> bool:
    pt = p_theta(p.theta)
    return (
        is_positive(p)
        and 1.0 < pt < 2.0
        and 0.0 <= p.a < 1.0
        and abs(p.b * p.c - (1.0 - p.a) ** 2) <= tol
    )


def neg_norm_closed_form(p: HaKyeParams) -> float:
    """||C_phi^-|| = max(0, p_theta - a); the rest of C_phi is diagonal b, c >= 0."""
    return max(0.0, p_theta(p.theta) - p.a)


def positivity_sampling_check(p: HaKyeParams, trials: int, seed: int, threads: int = 1) -> PositivityProbe:
    """
    Evaluate lambda_min(phi(xx*)) on seeded random unit vectors x in C³.

    Any value below -1e-10 is a violation of positivity.
    """
    stack = ha_kye_map(p).stacked()

    def chunk(rng: np.random.Generator, count: int) -> Tuple[int, float]:
        x = random_unit_vectors(rng, count, 3)
        proj = np.einsum("bi,bj->bij", x, x.conj()).reshape(count, 9)
        out = np.einsum("bk,kxy->bxy", proj, stack)
        out = 0.5 * (out + np.conj(np.transpose(out, (0, 2, 1))))
        lows = np.linalg.eigvalsh(out)[:, 0]
        return int(np.sum(lows < -VIOLATION_TOL)), float(lows.min())

    parts = chunked_map(chunk, trials, seed, threads)
    violations = sum(v for v, _ in parts)
    worst = min(w for _, w in parts)
    return PositivityProbe(trials=trials, violations=violations, worst=worst)


def delta_conditions(delta: float, epsilon: float) -> Tuple[bool, bool, bool]:
    """Conditions (i)-(iii) for theta = π - delta and a = p_theta - epsilon."""
    theta = math.pi - delta
    pt = p_theta(theta)
    cond_i = 1.0 < pt < 1.0 + epsilon
    cond_ii = (-np.exp(1j * theta)).real > 1.0 - epsilon
    # P(a,theta) - P always has the eigenvalue -epsilon, so (iii) is non-strict
    gap = operator_norm(p_submatrix(pt - epsilon, theta) - P_ALL_ONES)
    cond_iii = gap <= epsilon + CHAIN_TOL
    return cond_i, cond_ii, cond_iii


def find_delta(epsilon: float) -> Tuple[float, float]:
    """
    Bisect for the largest delta_max in (0, π/3) satisfying (i)-(iii), to
    width min(1e-6, 1e-3·epsilon), and return (delta_max / 2, delta_max).
    """
    # delta_max ≈ epsilon/√3
    width = min(DELTA_WIDTH, DELTA_RELATIVE_WIDTH * epsilon)
    lo, hi = 0.0, math.pi / 3.0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if all(delta_conditions(mid, epsilon)):
            lo = mid
        else:
            hi = mid
    if lo <= 0.0 or not all(delta_conditions(lo, epsilon)):
        raise DeltaSearchFailed(f"No delta in (0, π/3) satisfies conditions (i)-(iii) for epsilon={epsilon}")
    logger.debug("delta search for epsilon=%g: delta_max=%.9f", epsilon, lo)
    return 0.5 * lo, lo


def counterexample_params(epsilon: float) -> Tuple[HaKyeParams, float, float]:
    if not 0.0 < epsilon <= 0.25:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1/4], got {epsilon}")
    delta, delta_max = find_delta(epsilon)
    theta = math.pi - delta
    a = p_theta(theta) - epsilon
    b = epsilon
    c = (1.0 - a) ** 2 / b
    # keep bc >= (1 - a)² exact in floating point
    while b * c < (1.0 - a) ** 2:
        c = math.nextafter(c, math.inf)
    return HaKyeParams(a=a, b=b, c=c, theta=theta), delta, delta_max


def _link(name: str, lhs: float, rhs: float, op: str) -> ChainEntry:
    holds = {
        "<": lhs < rhs,
        ">": lhs > rhs,
        "<=": lhs <= rhs + CHAIN_TOL,
        ">=": lhs >= rhs - CHAIN_TOL,
    }[op]
    return ChainEntry(name=name, lhs=float(lhs), rhs=float(rhs), holds=bool(holds))


def counterexample(epsilon: float) -> CounterexampleReport:
    """
    Build an optimal phi(a,b,c,theta) whose SPA is entangled.

    theta = π - delta, a = p_theta - epsilon, b = epsilon, c = (1 - a)²/epsilon;
    psi = phi / (a + b + c) is unital and S(C_psi) exceeds 3 + 6||C_psi^-||.
    """
    p, delta, delta_max = counterexample_params(epsilon)
    pt = p_theta(p.theta)
    printed = p_theta_printed(p.theta)
    logger.debug("p_theta=%.12g (printed formula gives %.12g)", pt, printed)

    phi = ha_kye_map(p)
    scalar = p.a + p.b + p.c
    k = 1.0 / scalar
    psi = scale(phi, k)

    neg_phi = negative_part_norm(choi(phi).mat)
    c_psi = choi(psi).as_bipartite()
    s_psi = s_functional(c_psi).real
    t_psi = t_functional(c_psi).real
    result = spa(psi)
    neg_psi = result.neg_norm
    cert = spa_entanglement_certificate(psi)
    bound = 3.0 + 6.0 * neg_psi
    gap = operator_norm(p_submatrix(p.a, p.theta) - P_ALL_ONES)
    re_phase = float((-np.exp(1j * p.theta)).real)
    positive = is_positive(p)
    optimal = is_optimal_sufficient(p)

    chain: List[ChainEntry] = [
        _link("p_theta > 1", pt, 1.0, ">"),
        _link("p_theta < 1 + eps", pt, 1.0 + epsilon, "<"),
        _link("Re(-e^{i theta}) > 1 - eps", re_phase, 1.0 - epsilon, ">"),
        _link("||P(a,theta) - P|| <= eps", gap, epsilon, "<="),
        _link("c > 0", p.c, 0.0, ">"),
        _link("c < eps", p.c, epsilon, "<"),
        _link("a + b + c > p_theta", scalar, pt, ">"),
        _link("bc >= (1 - a)^2", p.b * p.c, (1.0 - p.a) ** 2, ">="),
        _link("positive (sufficient conditions)", float(positive), 1.0, ">="),
        _link("a < 1", p.a, 1.0, "<"),
        _link("p_theta < 2", pt, 2.0, "<"),
        _link("optimal (sufficient conditions)", float(optimal), 1.0, ">="),
        _link("phi(1) scalar > 1", scalar, 1.0, ">"),
        _link("phi(1) scalar < 1 + 2 eps", scalar, 1.0 + 2.0 * epsilon, "<"),
        _link("||C_phi^-|| <= eps", neg_phi, epsilon, "<="),
        _link("k > 1/(1 + 2 eps)", k, 1.0 / (1.0 + 2.0 * epsilon), ">"),
        _link("k < 1", k, 1.0, "<"),
        _link("S(C_psi) > 9k(1 - eps)", s_psi, 9.0 * k * (1.0 - epsilon), ">"),
        _link("9k(1 - eps) > 9(1 - eps)/(1 + 2 eps)", 9.0 * k * (1.0 - epsilon),
              9.0 * (1.0 - epsilon) / (1.0 + 2.0 * epsilon), ">"),
        _link("9(1 - eps)/(1 + 2 eps) >= 9/2", 9.0 * (1.0 - epsilon) / (1.0 + 2.0 * epsilon), 4.5, ">="),
        _link("9/2 >= 3 + 6||C_phi^-||", 4.5, 3.0 + 6.0 * neg_phi, ">="),
        # ||C_psi^-|| and ||C_phi^-|| differ by O(epsilon²)
        _link("||C_psi^-|| = k||C_phi^-||", abs(neg_psi - k * neg_phi), 0.0, "<="),
        _link("k||C_phi^-|| < ||C_phi^-||", k * neg_phi, neg_phi, "<"),
        _link("S(C_psi) > 3 + 6||C_psi^-||", s_psi, bound, ">"),
    ]
    all_hold = all(entry.holds for entry in chain) and cert.verdict == Verdict.ENTANGLED
    verdict = ChainVerdict.ENTANGLED if all_hold else ChainVerdict.FAILED
    if verdict == ChainVerdict.FAILED:
        logger.warning("Counterexample chain broken for epsilon=%g: %s", epsilon,
                       [e.name for e in chain if not e.holds])

    return CounterexampleReport(
        epsilon=epsilon,
        delta=delta,
        delta_max=delta_max,
        params=p,
        p_theta=pt,
        p_theta_printed=printed,
        k=k,
        S_psi=s_psi,
        T_psi=t_psi,
        neg_norm_phi=neg_phi,
        neg_norm_psi=neg_psi,
        t_star=result.t_star,
        bound=bound,
        margin=s_psi - bound,
        positive=positive,
        optimal=optimal,
        chain=chain,
        verdict=verdict,
    )
