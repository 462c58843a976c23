"""算子核心测试"""

import numpy as np
import pytest

from src.core import herm_eig, herm_fn, is_hermitian, trace_norm, unitary_exp
from src.core.exceptions import DimensionMismatch, NotHermitian, NotPSD, ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


@pytest.mark.parametrize("dim", [1, 2, 5, 9])
def test_jacobi_agrees_with_lapack(dim, rng):
    a = random_hermitian(dim, rng)
    lapack = herm_eig(a)
    jacobi = herm_eig(a, method="jacobi")

    np.testing.assert_allclose(jacobi.eigenvalues, lapack.eigenvalues, atol=1e-9)
    np.testing.assert_allclose(jacobi.reconstruct(), a, atol=1e-9)
    np.testing.assert_allclose(jacobi.eigenvectors.conj().T @ jacobi.eigenvectors, np.eye(dim), atol=1e-9)


def test_eigenvalues_ascending(rng):
    eig = herm_eig(random_hermitian(6, rng))
    assert np.all(np.diff(eig.eigenvalues) >= 0.0)


def test_jacobi_keeps_index_order_for_ties():
    eig = herm_eig(np.diag([2.0, 1.0, 1.0]), method="jacobi")
    np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0, 2.0])
    # 相等特征值保持原下标顺序
    np.testing.assert_allclose(np.abs(eig.eigenvectors[:, 0]), [0, 1, 0])
    np.testing.assert_allclose(np.abs(eig.eigenvectors[:, 1]), [0, 0, 1])


def test_jacobi_sweep_limit_raises():
    from src.core.exceptions import NoConvergence

    with pytest.raises(NoConvergence):
        herm_eig(np.array([[1.0, 0.3], [0.3, 2.0]]), method="jacobi", max_sweeps=0)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not is_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_non_square_rejected():
    with pytest.raises(DimensionMismatch):
        herm_eig(np.zeros((2, 3)))


def test_sqrt_squares_back(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = g @ g.conj().T
    root = herm_fn(a, "sqrt")
    np.testing.assert_allclose(root @ root, a, atol=1e-9)


def test_power_zero_is_support_projection():
    a = np.diag([0.5, 0.5, 0.0])
    np.testing.assert_allclose(herm_fn(a, "power", s=0.0), np.diag([1.0, 1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(herm_fn(a, "power", s=1.0), a, atol=1e-12)


def test_power_exponent_range():
    with pytest.raises(ValidationError):
        herm_fn(np.eye(2), "power", s=1.5)


def test_negative_matrix_not_psd():
    with pytest.raises(NotPSD):
        herm_fn(-np.eye(2), "sqrt")


def test_abs_of_indefinite_matrix():
    np.testing.assert_allclose(herm_fn(np.diag([1.0, -2.0]), "abs"), np.diag([1.0, 2.0]))


def test_trace_norm():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    assert trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0)


def test_unitary_exp_of_pauli_x():
    theta = 0.7
    expected = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * SIGMA_X
    np.testing.assert_allclose(unitary_exp(SIGMA_X, theta), expected, atol=1e-12)


def test_unitary_exp_is_unitary(rng):
    u = unitary_exp(random_hermitian(5, rng), 3.1)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_conjugate_matches_explicit_product(rng):
    b = random_hermitian(4, rng)
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    eig = herm_eig(b)
    u = eig.exp(1.3)
    np.testing.assert_allclose(eig.conjugate(1.3, rho), u @ rho @ u.conj().T, atol=1e-12)
