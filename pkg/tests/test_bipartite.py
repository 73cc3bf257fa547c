"""Tests for bipartite operators: S/T functionals, the flip, the twirl and separability checks."""

import numpy as np
import pytest

from sepcert.bipartite import (
    BipartiteOperator, flip, haar_random_unitaries, haar_random_unitary, is_density,
    max_entangled, max_entangled_fidelity, necessary_separability_check, partial_transpose,
    ppt_check, product_state, random_density, random_separable_density, require_density,
    s_functional, t_functional, twirl, twirl_monte_carlo, twirl_operator, unit,
    werner_operator, werner_separability,
)
from sepcert.errors import DimensionMismatch, DimensionTooSmall, NotAState
from sepcert.presets import get_pure_product
from sepcert.sampling import make_rng
from sepcert.schema import Verdict


def get_test_hermitian_operator(rng, n):
    g = rng.standard_normal((n * n, n * n)) + 1j * rng.standard_normal((n * n, n * n))
    return BipartiteOperator(n, 0.5 * (g + g.conj().T))


def get_antisymmetric_state(n):
    """(1 - V) / (n(n-1)), the normalized antisymmetric projection."""
    return (unit(n) - flip(n)) * (1.0 / (n * (n - 1)))


def test_coefficient_convention():
    """Test a_(ij)(kl) is the coefficient of e_ij ⊗ e_kl."""
    n = 3
    mat = np.zeros((9, 9), dtype=np.complex128)
    # e_01 ⊗ e_20
    mat[0 * n + 2, 1 * n + 0] = 5.0
    a = BipartiteOperator(n, mat)
    assert a.coefficient(0, 1, 2, 0) == 5.0
    assert a.tensor()[0, 2, 1, 0] == 5.0


def test_shape_mismatch_rejected():
    """Test that local_dim must match the matrix size."""
    with pytest.raises(DimensionMismatch):
        BipartiteOperator(2, np.eye(9))


def test_flip_n1():
    """Test V = [1] for n = 1."""
    np.testing.assert_array_equal(flip(1).mat, [[1.0]])


def test_flip_n2():
    """Test V swaps the middle basis vectors for n = 2."""
    expected = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_array_equal(flip(2).mat, expected)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flip_properties(n):
    """Test V² = 1, V Hermitian, Tr V = n and V(x⊗y) = y⊗x."""
    v = np.asarray(flip(n).mat)
    np.testing.assert_array_equal(v @ v, np.eye(n * n))
    np.testing.assert_array_equal(v, v.conj().T)
    assert np.trace(v).real == n
    rng = make_rng(n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(v @ np.kron(x, y), np.kron(y, x), atol=1e-14)


def test_s_t_of_max_entangled():
    """Test S(ê) = n and T(ê) = 1."""
    e = max_entangled(3)
    assert s_functional(e) == pytest.approx(3.0)
    assert t_functional(e) == pytest.approx(1.0)


def test_s_t_of_maximally_mixed():
    """Test S = T = 1/n for (1⊗1)/n²."""
    a = unit(3) * (1.0 / 9.0)
    assert s_functional(a) == pytest.approx(1.0 / 3.0)
    assert t_functional(a) == pytest.approx(1.0 / 3.0)


def test_t_of_product_is_trace_of_product():
    """Test T(b⊗c) = Tr(bc)."""
    rng = make_rng(4)
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert t_functional(product_state(b, c)) == pytest.approx(np.trace(b @ c), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_t_is_pairing_with_flip(n):
    """Test |T(a) - Tr(aV)| <= 1e-12 on random Hermitian a."""
    rng = make_rng(20 + n)
    v = np.asarray(flip(n).mat)
    for _ in range(334):
        a = get_test_hermitian_operator(rng, n)
        assert abs(t_functional(a) - np.trace(a.mat @ v)) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_is_t_of_partial_transpose(n):
    """Test S(a) = T(a^Γ) on random Hermitian a."""
    rng = make_rng(50 + n)
    for _ in range(100):
        a = get_test_hermitian_operator(rng, n)
        assert abs(s_functional(a) - t_functional(partial_transpose(a))) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_and_t_real_on_hermitian(n):
    """Test |Im S(a)|, |Im T(a)| <= 1e-12 on random Hermitian a."""
    rng = make_rng(60 + n)
    for _ in range(100):
        a = get_test_hermitian_operator(rng, n)
        assert abs(s_functional(a).imag) <= 1e-12
        assert abs(t_functional(a).imag) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_twirl_idempotent(n):
    """Test twirling the reconstructed Werner operator returns the same alpha, beta."""
    rng = make_rng(70 + n)
    for _ in range(100):
        a = get_test_hermitian_operator(rng, n)
        first = twirl(a)
        second = twirl(first.reconstruct(n))
        assert abs(second.alpha - first.alpha) <= 1e-12
        assert abs(second.beta - first.beta) <= 1e-12


def test_t_invariant_under_twirl():
    """Test T(P(a)) = T(a)."""
    a = random_density(3, seed=5)
    assert t_functional(twirl_operator(a)) == pytest.approx(t_functional(a), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_is_max_entangled_fidelity(n):
    """Test S(a) = n·Tr(a ê)."""
    a = random_density(n, seed=30 + n)
    assert s_functional(a) == pytest.approx(n * max_entangled_fidelity(a), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_separable_states_obey_st_bounds(n):
    """Test 0 <= S, T <= 1 on random separable densities."""
    rng = make_rng(1000 + n)
    for _ in range(3334):
        a = random_separable_density(rng, n)
        s = s_functional(a).real
        t = t_functional(a).real
        assert -1e-9 <= s <= 1.0 + 1e-9
        assert -1e-9 <= t <= 1.0 + 1e-9


def test_partial_transpose_of_flip():
    """Test the partial transpose maps V to n·ê."""
    n = 3
    np.testing.assert_allclose(partial_transpose(flip(n)).mat, n * max_entangled(n).mat, atol=1e-15)


def test_ppt():
    """Test ê fails PPT while a product state passes."""
    assert not ppt_check(max_entangled(3))
    assert ppt_check(get_pure_product(3))


def test_twirl_fixed_point():
    """Test P((1⊗1)/n²) has alpha = 1/n² and beta = 0."""
    for n in [2, 3, 5]:
        form = twirl(unit(n) * (1.0 / (n * n)))
        assert form.alpha == pytest.approx(1.0 / (n * n))
        assert form.beta == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_twirl_of_pure_product(n):
    """Test P(e⊗e) = (1⊗1 + V) / (n(n+1))."""
    p = twirl_operator(get_pure_product(n))
    expected = (np.eye(n * n) + flip(n).mat) / (n * (n + 1))
    np.testing.assert_allclose(p.mat, expected, atol=1e-14)


def test_twirl_of_max_entangled():
    """Test alpha = beta = 1/12 for ê with n = 3."""
    form = twirl(max_entangled(3))
    assert form.alpha == pytest.approx(1.0 / 12.0)
    assert form.beta == pytest.approx(1.0 / 12.0)


def test_twirl_linear_system():
    """Test alpha n² + beta n = Tr(a) and alpha n + beta n² = T(a)."""
    n = 4
    a = random_density(n, seed=9)
    form = twirl(a)
    assert form.alpha * n * n + form.beta * n == pytest.approx(a.trace(), abs=1e-12)
    assert form.alpha * n + form.beta * n * n == pytest.approx(t_functional(a), abs=1e-12)


def test_twirl_n1_rejected():
    """Test that the twirl is undefined for n = 1."""
    with pytest.raises(DimensionTooSmall):
        twirl(unit(1))


def test_twirl_closed_form_is_invariant():
    """Test (U⊗U)* P(a) (U⊗U) = P(a) for 100 random unitaries."""
    p = np.asarray(twirl_operator(random_density(3, seed=2)).mat)
    for u in haar_random_unitaries(make_rng(77), 100, 3):
        w = np.kron(u, u)
        np.testing.assert_allclose(w.conj().T @ p @ w, p, atol=1e-10)


def test_haar_unitaries_are_unitary():
    """Test U*U = 1 within 1e-12."""
    for u in haar_random_unitaries(make_rng(3), 50, 4):
        np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_haar_unitary_seeded():
    """Test that a seed fixes the unitary."""
    np.testing.assert_array_equal(haar_random_unitary(3, 11), haar_random_unitary(3, 11))
    assert not np.array_equal(haar_random_unitary(3, 11), haar_random_unitary(3, 12))


def test_monte_carlo_twirl_matches_closed_form():
    """Test the Haar average against the closed form for 10 random densities (10⁵ samples)."""
    for k in range(10):
        a = random_density(3, seed=200 + k)
        sampled = twirl_monte_carlo(a, samples=100_000, seed=7 + k)
        np.testing.assert_allclose(sampled.mat, twirl_operator(a).mat, atol=5e-3)


def test_monte_carlo_twirl_preserves_trace():
    """Test that conjugation keeps the trace exactly."""
    a = random_density(3, seed=8)
    sampled = twirl_monte_carlo(a, samples=500, seed=1)
    assert sampled.trace() == pytest.approx(1.0, abs=1e-12)


def test_monte_carlo_twirl_of_werner_input():
    """Test that an invariant input comes back unchanged."""
    w = werner_operator(3, 0.05, 0.02)
    sampled = twirl_monte_carlo(w, samples=200, seed=4)
    np.testing.assert_allclose(sampled.mat, w.mat, atol=1e-12)


def test_necessary_check_max_entangled():
    """Test ê is certified entangled with S = 3."""
    report = necessary_separability_check(max_entangled(3))
    assert report.verdict == Verdict.ENTANGLED
    assert report.S == pytest.approx(3.0)
    assert report.ppt is False


def test_necessary_check_maximally_mixed():
    """Test (1⊗1)/9 is Inconclusive with S = T = 1/3."""
    report = necessary_separability_check(unit(3) * (1.0 / 9.0))
    assert report.verdict == Verdict.INCONCLUSIVE
    assert report.S == pytest.approx(1.0 / 3.0)
    assert report.T == pytest.approx(1.0 / 3.0)


def test_necessary_check_product_state():
    """Test random product states stay Inconclusive."""
    rng = make_rng(6)
    a = random_separable_density(rng, 3, terms=1)
    report = necessary_separability_check(a)
    assert report.verdict == Verdict.INCONCLUSIVE
    assert 0.0 <= report.S <= 1.0 and 0.0 <= report.T <= 1.0


def test_necessary_check_rejects_non_state():
    """Test that trace != 1 raises NotAState."""
    with pytest.raises(NotAState):
        necessary_separability_check(unit(2))


def test_require_density_rejects_negative():
    """Test that an indefinite operator raises NotAState."""
    with pytest.raises(NotAState):
        require_density(flip(2) * 0.5)


def test_random_density_is_state():
    """Test random densities are Hermitian, PSD and unit trace."""
    for seed in range(5):
        assert is_density(random_density(3, seed))


def test_werner_verdicts():
    """Test Entangled below 0, Separable above 1/n and Inconclusive in between."""
    n = 3
    anti = get_antisymmetric_state(n)
    assert t_functional(anti) == pytest.approx(-1.0)
    assert werner_separability(anti) == Verdict.ENTANGLED
    assert werner_separability(get_pure_product(n)) == Verdict.SEPARABLE
    assert werner_separability(max_entangled(n)) == Verdict.SEPARABLE

    # p/n - (1-p) = 1/(2n)
    p = (1.0 + 1.0 / (2 * n)) / (1.0 + 1.0 / n)
    mixed = unit(n) * (p / (n * n)) + anti * (1.0 - p)
    assert t_functional(mixed).real == pytest.approx(1.0 / (2 * n))
    assert werner_separability(mixed) == Verdict.INCONCLUSIVE
