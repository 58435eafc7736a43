"""Small dense linear-algebra helpers shared by the reducers and clusterers."""

from __future__ import annotations

import numpy as np


def symmetric_eig(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a real symmetric matrix with a fixed convention.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted
    non-increasing, eigenvectors in matching columns, and each eigenvector's
    largest-magnitude entry made positive so repeated runs agree in sign.
    """
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-8 * max(1.0, float(np.abs(A).max(initial=0.0)))):
        raise ValueError("matrix is not symmetric")
    values, vectors = np.linalg.eigh(A)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]
    flip = np.take_along_axis(
        vectors, np.abs(vectors).argmax(axis=0)[None, :], axis=0
    )[0] < 0
    vectors[:, flip] = -vectors[:, flip]
    return values, vectors


def pairwise_sq_dists(X: np.ndarray, Y: np.ndarray | None = None) -> np.ndarray:
    """Squared Euclidean distances between rows of X and rows of Y."""
    X = np.asarray(X, dtype=float)
    Y = X if Y is None else np.asarray(Y, dtype=float)
    x2 = np.sum(X * X, axis=1)[:, None]
    y2 = np.sum(Y * Y, axis=1)[None, :]
    d2 = x2 + y2 - 2.0 * (X @ Y.T)
    return np.maximum(d2, 0.0)
