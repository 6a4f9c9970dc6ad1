import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_hermitian
from mxlearn.hermitian import (
    entropy_conjugate,
    exp_map,
    fenchel_coupling,
    from_eig,
    herm_eig,
    hermitian,
    hermitize,
    inv_sqrt,
    logdet,
    orthonormalize,
    von_neumann_entropy,
)


def _herm_strategy(m, bound=50.0):
    reals = arrays(float, (2, m, m), elements=st.floats(-bound, bound, allow_nan=False))
    return reals.map(lambda a: hermitize(a[0] + 1j * a[1]))


class TestHermitize:
    def test_fixed_point(self, rng):
        A = random_hermitian(rng, 4)
        np.testing.assert_array_equal(hermitize(A), A)

    def test_upper_shift(self):
        np.testing.assert_allclose(hermitize(np.array([[0, 1], [0, 0]])), [[0, 0.5], [0.5, 0]])

    def test_skew_hermitian_cancels(self, rng):
        A = random_hermitian(rng, 3)
        np.testing.assert_allclose(hermitize(1j * A), 0, atol=1e-15)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitize(np.zeros((2, 3)))

    def test_hermitian_rejects_asymmetric_and_nan(self):
        with pytest.raises(ValueError):
            hermitian(np.array([[0, 1], [0, 0]]))
        with pytest.raises(ValueError):
            hermitian(np.array([[np.nan, 0], [0, 1]]))


class TestHermEig:
    def test_identity(self):
        w, U = herm_eig(np.eye(2))
        np.testing.assert_allclose(w, [1, 1])
        np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-15)

    def test_diagonal_is_permuted_basis(self):
        w, U = herm_eig(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(w, [1, 3])
        np.testing.assert_allclose(np.abs(U), [[0, 1], [1, 0]], atol=1e-15)

    @pytest.mark.parametrize("m", [1, 2, 4, 8])
    def test_reconstruction_and_unitarity(self, rng, m):
        A = random_hermitian(rng, m)
        w, U = herm_eig(A)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(from_eig(w, U) - A) <= 1e-10 * np.linalg.norm(A)
        assert np.linalg.norm(U.conj().T @ U - np.eye(m)) <= 1e-12 * m

    def test_deterministic(self, rng):
        A = random_hermitian(rng, 5)
        a, b = herm_eig(A), herm_eig(A.copy())
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            herm_eig(np.array([[np.inf, 0], [0, 1]]))


class TestExpMap:
    def test_zero_is_uniform(self):
        np.testing.assert_allclose(exp_map(np.zeros((2, 2))), 0.5 * np.eye(2))

    def test_diagonal(self):
        np.testing.assert_allclose(exp_map(np.diag([np.log(2), 0.0])), np.diag([2 / 3, 1 / 3]), atol=1e-15)

    def test_large_shift(self):
        Q = exp_map(np.diag([1000 + np.log(2), 1000.0]))
        np.testing.assert_allclose(Q, np.diag([2 / 3, 1 / 3]), atol=1e-12)

    def test_rejects_nonpositive_power(self):
        with pytest.raises(ValueError):
            exp_map(np.zeros((2, 2)), 0.0)

    @settings(max_examples=200, deadline=None)
    @given(Y=_herm_strategy(3, 500.0), P=st.floats(1e-3, 1e3))
    def test_feasible(self, Y, P):
        Q = exp_map(Y, P)
        np.testing.assert_array_equal(Q, Q.conj().T)
        assert np.linalg.eigvalsh(Q)[0] >= -1e-12 * P
        assert abs(np.trace(Q).real - P) <= 1e-10 * P

    @settings(max_examples=100, deadline=None)
    @given(Y=_herm_strategy(3), c=st.floats(-1e3, 1e3))
    def test_shift_invariance(self, Y, c):
        np.testing.assert_allclose(exp_map(Y + c * np.eye(3)), exp_map(Y), atol=1e-10)


class TestEntropy:
    def test_uniform(self):
        assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(-np.log(4))

    def test_pure_state(self, rng):
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v /= np.linalg.norm(v)
        assert von_neumann_entropy(np.outer(v, v.conj())) == pytest.approx(0.0, abs=1e-10)

    def test_diagonal(self):
        expected = 2 / 3 * np.log(2 / 3) + 1 / 3 * np.log(1 / 3)
        assert von_neumann_entropy(np.diag([2 / 3, 1 / 3])) == pytest.approx(expected)
        assert expected == pytest.approx(-0.6365, abs=1e-4)

    def test_rejects_negative_spectrum(self):
        with pytest.raises(ValueError):
            von_neumann_entropy(np.diag([1.1, -0.1]))

    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_bounds(self, rng, m):
        for _ in range(20):
            Q = exp_map(random_hermitian(rng, m, 3.0))
            h = von_neumann_entropy(Q)
            assert -np.log(m) - 1e-12 <= h <= 1e-12


class TestConjugate:
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_zero(self, m):
        assert entropy_conjugate(np.zeros((m, m))) == pytest.approx(np.log(m))

    def test_diagonal(self):
        assert entropy_conjugate(np.diag([np.log(2), 0])) == pytest.approx(np.log(3))

    def test_stable_for_large_scores(self):
        assert entropy_conjugate(np.diag([1000.0, 1000.0])) == pytest.approx(1000 + np.log(2))

    def test_gradient_is_exp_map(self, rng):
        Y = random_hermitian(rng, 3)
        G = exp_map(Y)
        h = 1e-5
        for _ in range(5):
            D = random_hermitian(rng, 3)
            fd = (entropy_conjugate(Y + h * D) - entropy_conjugate(Y - h * D)) / (2 * h)
            exact = np.real(np.sum(G * D.conj()))
            assert fd == pytest.approx(exact, rel=1e-6)


class TestFenchelCoupling:
    def test_zero_at_mirror_image(self, rng):
        Y = random_hermitian(rng, 4)
        assert fenchel_coupling(exp_map(Y), Y) == pytest.approx(0.0, abs=1e-10)

    def test_zero_scores(self, rng):
        Q = exp_map(random_hermitian(rng, 4, 2.0))
        F = fenchel_coupling(Q, np.zeros((4, 4)))
        assert F == pytest.approx(von_neumann_entropy(Q) + np.log(4))
        assert F <= np.log(4) + 1e-12

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_nonnegative(self, rng, m):
        for _ in range(50):
            Q = exp_map(random_hermitian(rng, m, 3.0))
            assert fenchel_coupling(Q, random_hermitian(rng, m, 3.0)) >= -1e-12

    def test_gradient_in_scores(self, rng):
        Q = exp_map(random_hermitian(rng, 3))
        Y = random_hermitian(rng, 3)
        G = exp_map(Y) - Q
        h = 1e-5
        D = random_hermitian(rng, 3)
        fd = (fenchel_coupling(Q, Y + h * D) - fenchel_coupling(Q, Y - h * D)) / (2 * h)
        assert fd == pytest.approx(np.real(np.sum(G * D.conj())), rel=1e-6)


class TestOrthonormalize:
    def test_unitary_fixed_point(self, rng):
        U = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
        np.testing.assert_allclose(orthonormalize(U), U, atol=1e-12)

    def test_small_perturbation(self, rng):
        A = np.eye(4) + 1e-4 * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        U = orthonormalize(A)
        assert np.linalg.norm(U.conj().T @ U - np.eye(4)) <= 1e-12 * 4
        assert np.linalg.norm(U - A) < 1e-3

    def test_scaled_columns(self):
        np.testing.assert_allclose(orthonormalize(np.diag([2.0, 3.0])), np.eye(2))

    def test_preserves_column_flags(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        U = orthonormalize(A)
        for j in range(1, 5):
            # columns of A[:, :j] lie in span of U[:, :j]
            proj = U[:, :j] @ (U[:, :j].conj().T @ A[:, :j])
            np.testing.assert_allclose(proj, A[:, :j], atol=1e-10)

    def test_rejects_dependent_columns(self):
        with pytest.raises(ValueError):
            orthonormalize(np.array([[1.0, 2.0], [1.0, 2.0]]))


def test_inv_sqrt_and_logdet(rng):
    A = random_hermitian(rng, 4)
    A = A @ A + np.eye(4)
    S = inv_sqrt(A)
    np.testing.assert_allclose(S @ A @ S, np.eye(4), atol=1e-10)
    assert logdet(A) == pytest.approx(np.log(np.linalg.det(A).real))
