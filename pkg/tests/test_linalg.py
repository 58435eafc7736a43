import numpy as np
import pytest

from refractory.linalg import pairwise_sq_dists, symmetric_eig


def test_eig_residual_bound():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = rng.integers(2, 30)
        A = rng.normal(size=(n, n))
        A = (A + A.T) / 2.0
        values, vectors = symmetric_eig(A)
        norm = np.linalg.norm(A)
        for j in range(n):
            residual = np.linalg.norm(A @ vectors[:, j] - values[j] * vectors[:, j])
            assert residual <= 1e-8 * max(norm, 1e-30)


def test_eig_descending_order():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(12, 12))
    A = A + A.T
    values, _ = symmetric_eig(A)
    assert np.all(np.diff(values) <= 1e-12)


def test_eig_known_matrix():
    A = np.array([[2.0, 0.0], [0.0, -1.0]])
    values, vectors = symmetric_eig(A)
    np.testing.assert_allclose(values, [2.0, -1.0])
    np.testing.assert_allclose(np.abs(vectors), np.eye(2), atol=1e-12)


def test_eig_sign_convention():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(9, 9))
    A = A + A.T
    _, vectors = symmetric_eig(A)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        assert col[np.argmax(np.abs(col))] > 0


def test_eig_orthonormal_vectors():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(15, 15))
    A = A + A.T
    _, V = symmetric_eig(A)
    np.testing.assert_allclose(V.T @ V, np.eye(15), atol=1e-10)


def test_eig_rejects_non_symmetric():
    with pytest.raises(ValueError):
        symmetric_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        symmetric_eig(np.ones((2, 3)))


def test_pairwise_sq_dists_matches_direct():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(8, 3))
    Y = rng.normal(size=(5, 3))
    D = pairwise_sq_dists(X, Y)
    for i in range(8):
        for j in range(5):
            expected = np.sum((X[i] - Y[j]) ** 2)
            assert abs(D[i, j] - expected) < 1e-10


def test_pairwise_sq_dists_self_nonnegative_zero_diag():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(10, 4))
    D = pairwise_sq_dists(X)
    assert D.min() >= 0.0
    np.testing.assert_allclose(np.diag(D), 0.0, atol=1e-12)
