"""Dimensionality reduction: PCA, kernel PCA, ICA, and ISOMAP.

All four share one surface: fit_reducer builds a ReducerModel, transform maps
rows through it. Kernel PCA is the workhorse; PCA is its linear-kernel
special case and the two agree on training data up to column signs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import ConnectivityError, ConvergenceError, ParseError
from .featurize import FeatureMatrix
from .linalg import pairwise_sq_dists, symmetric_eig

LINEAR = "LINEAR"
RBF = "RBF"

REDUCERS = ("PCA", "KPCA", "ICA", "ISOMAP")

# Eigenvalues at or below max_eigenvalue * this ratio are treated as zero.
_EIG_TOL_RATIO = 1e-10

_ICA_TOL = 1e-4
_ICA_MAX_ITER = 200


def default_gamma(X: np.ndarray) -> float:
    """Kernel width 1 / (n_features * mean per-feature variance).

    Falls back to 1 / n_features when the data is constant.
    """
    X = np.asarray(X, dtype=float)
    mean_var = float(np.var(X, axis=0).mean())
    if mean_var <= 0.0:
        return 1.0 / X.shape[1]
    return 1.0 / (X.shape[1] * mean_var)


@dataclass(frozen=True)
class KernelSpec:
    kind: str = RBF
    gamma: float | None = None  # None: derive from the data at fit time

    def __post_init__(self):
        if self.kind not in (LINEAR, RBF):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||a - b||^2) for two vectors."""
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.exp(-gamma * np.dot(diff, diff)))


def kernel_gram(X: np.ndarray, Y: np.ndarray | None, spec: KernelSpec, gamma: float) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    Y = X if Y is None else np.asarray(Y, dtype=float)
    if spec.kind == LINEAR:
        return X @ Y.T
    return np.exp(-gamma * pairwise_sq_dists(X, Y))


def center_kernel(K: np.ndarray) -> np.ndarray:
    """Double-center a Gram matrix so the implied feature map has zero mean.

    K' = K - 1K - K1 + 1K1 with 1 the (1/n)-filled matrix; row and column
    sums of the result vanish and the operation is idempotent.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"expected a square Gram matrix, got shape {K.shape}")
    col = K.mean(axis=0, keepdims=True)
    row = K.mean(axis=1, keepdims=True)
    grand = K.mean()
    return K - col - row + grand


@dataclass
class ReducerModel:
    """Fitted reducer state; which fields are set depends on the method."""

    method: str
    n_components: int
    eigenvalues: np.ndarray | None = None
    # PCA
    mean: np.ndarray | None = None
    axes: np.ndarray | None = None
    # KPCA
    kernel: KernelSpec | None = None
    gamma: float | None = None
    train_X: np.ndarray | None = None
    dual_axes: np.ndarray | None = None      # eigenvectors scaled by 1/sqrt(eigenvalue)
    kernel_col_means: np.ndarray | None = None
    kernel_grand_mean: float | None = None
    # ICA
    unmixing: np.ndarray | None = None       # maps centered rows to sources
    # ISOMAP
    n_neighbors: int | None = None
    train_embedding: np.ndarray | None = None
    row_ids: list[str] | None = None


@dataclass
class Embedding:
    """Reduced coordinates, one row per input row."""

    values: np.ndarray
    method: str
    row_ids: list[str] | None = None


def _as_array(X) -> tuple[np.ndarray, list[str] | None]:
    if isinstance(X, FeatureMatrix):
        return np.asarray(X.values, dtype=float), list(X.row_ids)
    return np.asarray(X, dtype=float), None


def _validate_fit_input(X: np.ndarray, k: int) -> None:
    if X.ndim != 2:
        raise ValueError("expected a 2-dimensional matrix")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows to fit a reducer")
    if not np.isfinite(X).all():
        raise ValueError("matrix contains non-finite values")
    if k < 1:
        raise ValueError("k must be at least 1")


def fit_reducer(
    method: str,
    X,
    k: int | None = None,
    *,
    kernel: KernelSpec | None = None,
    n_neighbors: int = 10,
    seed: int = 0,
) -> ReducerModel:
    """Fit one of PCA, KPCA, ICA, ISOMAP with k output components.

    k defaults to min(50, n_rows - 1) for the kernel methods and is capped by
    min(n_rows, n_features) for PCA/ICA. KPCA drops components whose
    eigenvalue is numerically zero and reports the shrunken count in the
    model's n_components.
    """
    data, row_ids = _as_array(X)
    n, d = data.shape if data.ndim == 2 else (0, 0)
    if k is None:
        k = min(50, n - 1) if n > 1 else 1
    _validate_fit_input(data, k)

    if method == "PCA":
        if k > min(n, d):
            raise ValueError(f"PCA k={k} exceeds min(n_samples, n_features)={min(n, d)}")
        model = _fit_pca(data, k)
    elif method == "KPCA":
        if k > n - 1:
            raise ValueError(f"KPCA k={k} exceeds n_samples - 1 = {n - 1}")
        model = _fit_kpca(data, k, kernel or KernelSpec(RBF))
    elif method == "ICA":
        if k > min(n, d):
            raise ValueError(f"ICA k={k} exceeds min(n_samples, n_features)={min(n, d)}")
        model = _fit_ica(data, k, seed)
    elif method == "ISOMAP":
        if k > n - 1:
            raise ValueError(f"ISOMAP k={k} exceeds n_samples - 1 = {n - 1}")
        model = _fit_isomap(data, k, n_neighbors)
    else:
        raise ValueError(f"unknown reducer {method!r}")
    model.row_ids = row_ids
    return model


def transform(model: ReducerModel, X) -> Embedding:
    """Map rows through a fitted reducer.

    ISOMAP has no out-of-sample extension here: it only accepts the exact
    training matrix and returns the stored embedding.
    """
    data, row_ids = _as_array(X)
    if data.ndim != 2:
        raise ValueError("expected a 2-dimensional matrix")

    if model.method == "PCA":
        values = (data - model.mean) @ model.axes
    elif model.method == "KPCA":
        K = kernel_gram(data, model.train_X, model.kernel, model.gamma)
        centered = (
            K
            - K.mean(axis=1, keepdims=True)
            - model.kernel_col_means[None, :]
            + model.kernel_grand_mean
        )
        values = centered @ model.dual_axes
    elif model.method == "ICA":
        values = (data - model.mean) @ model.unmixing.T
    elif model.method == "ISOMAP":
        if model.train_X.shape != data.shape or not np.array_equal(model.train_X, data):
            raise ValueError("ISOMAP can only transform the rows it was fitted on")
        values = model.train_embedding.copy()
        if row_ids is None:
            row_ids = model.row_ids
    else:
        raise ValueError(f"unknown reducer {model.method!r}")
    return Embedding(np.asarray(values, dtype=float), model.method, row_ids)


def _fit_pca(X: np.ndarray, k: int) -> ReducerModel:
    mean = X.mean(axis=0)
    centered = X - mean
    cov = (centered.T @ centered) / X.shape[0]
    values, vectors = symmetric_eig(cov)
    return ReducerModel(
        method="PCA",
        n_components=k,
        eigenvalues=values[:k],
        mean=mean,
        axes=vectors[:, :k],
    )


def _fit_kpca(X: np.ndarray, k: int, kernel: KernelSpec) -> ReducerModel:
    gamma = kernel.gamma
    if gamma is None:
        gamma = default_gamma(X) if kernel.kind == RBF else 0.0
    K = kernel_gram(X, None, kernel, gamma)
    col_means = K.mean(axis=0)
    grand_mean = float(K.mean())
    centered = center_kernel(K)
    values, vectors = symmetric_eig(centered)

    keep = min(k, len(values))
    tol = max(values[0], 0.0) * _EIG_TOL_RATIO if len(values) else 0.0
    while keep > 0 and values[keep - 1] <= tol:
        keep -= 1
    if keep == 0:
        raise ValueError("kernel matrix has no positive eigenvalues; nothing to embed")
    top = values[:keep]
    dual_axes = vectors[:, :keep] / np.sqrt(top)[None, :]
    return ReducerModel(
        method="KPCA",
        n_components=keep,
        eigenvalues=top,
        kernel=kernel,
        gamma=gamma,
        train_X=X.copy(),
        dual_axes=dual_axes,
        kernel_col_means=col_means,
        kernel_grand_mean=grand_mean,
    )


def _fit_ica(X: np.ndarray, k: int, seed: int) -> ReducerModel:
    """FastICA by deflation with the logcosh contrast on whitened data."""
    mean = X.mean(axis=0)
    centered = X - mean
    cov = (centered.T @ centered) / X.shape[0]
    values, vectors = symmetric_eig(cov)
    if values[k - 1] <= max(values[0], 0.0) * _EIG_TOL_RATIO:
        raise ValueError(f"data rank is below k={k}; cannot whiten")
    whiten = vectors[:, :k] / np.sqrt(values[:k])[None, :]
    Z = centered @ whiten  # unit-variance, uncorrelated columns

    rng = np.random.default_rng(seed)
    W = np.zeros((k, k))
    n = Z.shape[0]
    for i in range(k):
        w = rng.standard_normal(k)
        w /= np.linalg.norm(w)
        for iteration in range(1, _ICA_MAX_ITER + 1):
            u = Z @ w
            g = np.tanh(u)
            g_prime = 1.0 - g * g
            w_new = (Z.T @ g) / n - g_prime.mean() * w
            w_new -= W[:i].T @ (W[:i] @ w_new)
            norm = np.linalg.norm(w_new)
            if norm < 1e-12:
                w_new = rng.standard_normal(k)
                w_new -= W[:i].T @ (W[:i] @ w_new)
                norm = np.linalg.norm(w_new)
            w_new /= norm
            if abs(abs(np.dot(w_new, w)) - 1.0) < _ICA_TOL:
                w = w_new
                break
            w = w_new
        else:
            raise ConvergenceError(
                f"ICA component {i} did not converge within {_ICA_MAX_ITER} iterations",
                iterations=_ICA_MAX_ITER,
            )
        W[i] = w

    unmixing = W @ whiten.T  # sources = (X - mean) @ unmixing.T
    return ReducerModel(
        method="ICA",
        n_components=k,
        eigenvalues=values[:k],
        mean=mean,
        unmixing=unmixing,
    )


def _fit_isomap(X: np.ndarray, k: int, n_neighbors: int) -> ReducerModel:
    if n_neighbors < 1:
        raise ValueError("n_neighbors must be positive")
    n = X.shape[0]
    n_neighbors = min(n_neighbors, n - 1)
    d2 = pairwise_sq_dists(X)
    dist = np.sqrt(d2)

    # Symmetrized kNN graph: keep each row's n_neighbors nearest others.
    ranked = d2.copy()
    np.fill_diagonal(ranked, np.inf)
    order = np.argsort(ranked, axis=1, kind="stable")
    rows = np.repeat(np.arange(n), n_neighbors)
    cols = order[:, :n_neighbors].ravel()
    # Tiny floor keeps zero-distance edges (duplicate rows) explicit in the
    # sparse graph; scipy would otherwise silently drop them.
    weights = np.maximum(dist[rows, cols], 1e-300)
    graph = csr_matrix((weights, (rows, cols)), shape=(n, n))
    graph = graph.maximum(graph.T)

    n_comp, _ = connected_components(graph, directed=False)
    if n_comp > 1:
        raise ConnectivityError(n_comp)

    geo = shortest_path(graph, method="D", directed=False)

    # Classical MDS on the squared geodesics.
    B = -0.5 * center_kernel(geo**2)
    values, vectors = symmetric_eig(B)
    keep = min(k, len(values))
    tol = max(values[0], 0.0) * _EIG_TOL_RATIO
    while keep > 0 and values[keep - 1] <= tol:
        keep -= 1
    if keep == 0:
        raise ValueError("geodesic Gram matrix has no positive eigenvalues")
    embedding = vectors[:, :keep] * np.sqrt(values[:keep])[None, :]
    return ReducerModel(
        method="ISOMAP",
        n_components=keep,
        eigenvalues=values[:keep],
        n_neighbors=n_neighbors,
        train_X=X.copy(),
        train_embedding=embedding,
    )


EMBEDDING_FLOAT_FORMAT = "%.17g"


def write_embedding(embedding: Embedding, path: str | Path) -> None:
    """Embedding CSV: patient_id, then c0..c{k-1} at 17 significant digits."""
    k = embedding.values.shape[1]
    ids = embedding.row_ids
    if ids is None:
        ids = [f"row{i:05d}" for i in range(embedding.values.shape[0])]
    lines = ["patient_id," + ",".join(f"c{i}" for i in range(k))]
    for pid, row in zip(ids, embedding.values):
        lines.append(pid + "," + ",".join(EMBEDDING_FLOAT_FORMAT % v for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_embedding(path: str | Path, method: str = "KPCA") -> Embedding:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("patient_id"):
        raise ParseError(1, "expected an embedding header starting with patient_id")
    width = len(lines[0].split(","))
    row_ids = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != width:
            raise ParseError(lineno, f"expected {width} fields, got {len(fields)}")
        row_ids.append(fields[0])
        try:
            rows.append([float(v) for v in fields[1:]])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from exc
    return Embedding(np.asarray(rows, dtype=float), method, row_ids)
