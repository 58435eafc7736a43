"""Clustering methods and the reduction-by-method sweep grid.

Four methods behind one call: k-means (k-means++ seeding, Lloyd updates),
a diagonal-covariance Gaussian mixture fit by EM, normalized-Laplacian
spectral clustering, and Ward agglomeration. clustering_sweep runs every
(reduction, method) pair and scores the labels against cohort labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import reduce as reduce_mod
from .featurize import FeatureMatrix
from .linalg import pairwise_sq_dists, symmetric_eig
from .metrics import adjusted_mutual_info, adjusted_rand

KMEANS = "KMEANS"
GMM = "GMM"
SPECTRAL = "SPECTRAL"
AGGLOMERATIVE = "AGGLOMERATIVE"

CLUSTER_METHODS = (KMEANS, GMM, SPECTRAL, AGGLOMERATIVE)

SWEEP_REDUCTIONS = ("none", "PCA", "ICA", "KPCA", "ISOMAP")

_GMM_VAR_FLOOR = 1e-6
_GMM_TOL = 1e-6
_GMM_MAX_ITER = 200


@dataclass(frozen=True)
class ClusterConfig:
    method: str
    n_clusters: int = 2
    seed: int = 0
    restarts: int = 10
    max_iter: int = 300
    affinity_gamma: float | None = None  # SPECTRAL; None derives from the data

    def __post_init__(self):
        if self.method not in CLUSTER_METHODS:
            raise ValueError(f"unknown clustering method {self.method!r}")
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be positive")
        if self.restarts < 1 or self.max_iter < 1:
            raise ValueError("restarts and max_iter must be positive")


@dataclass
class ClusterAssignment:
    """Labels plus the method's objective and its per-iteration trace.

    The trace is the Lloyd inertia path for KMEANS (and for SPECTRAL's
    k-means stage), the log-likelihood path for GMM, and the merge-cost
    sequence for AGGLOMERATIVE.
    """

    labels: np.ndarray
    objective: float
    trace: list[float] = field(default_factory=list)


def fit_clusters(config: ClusterConfig, X) -> ClusterAssignment:
    if isinstance(X, FeatureMatrix):
        X = X.values
    data = np.asarray(X, dtype=float)
    if data.ndim != 2:
        raise ValueError("expected a 2-dimensional matrix")
    if not np.isfinite(data).all():
        raise ValueError("matrix contains non-finite values")
    if config.n_clusters > data.shape[0]:
        raise ValueError(
            f"n_clusters={config.n_clusters} exceeds the number of rows {data.shape[0]}"
        )
    if config.method == KMEANS:
        labels, _, inertia, trace = _kmeans(data, config)
        return ClusterAssignment(labels, inertia, trace)
    if config.method == GMM:
        return _gmm(data, config)
    if config.method == SPECTRAL:
        return _spectral(data, config)
    return _agglomerative(data, config)


# ---------------------------------------------------------------------------
# k-means


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            centers[i] = X[rng.integers(n)]
            continue
        centers[i] = X[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((X - centers[i]) ** 2, axis=1))
    return centers


def _lloyd(
    X: np.ndarray, centers: np.ndarray, max_iter: int
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    k = centers.shape[0]
    labels = np.full(X.shape[0], -1)
    trace: list[float] = []
    for _ in range(max_iter):
        d2 = pairwise_sq_dists(X, centers)
        new_labels = d2.argmin(axis=1)
        inertia = float(d2[np.arange(X.shape[0]), new_labels].sum())
        trace.append(inertia)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for i in range(k):
            members = labels == i
            if members.any():
                centers[i] = X[members].mean(axis=0)
            else:
                # Re-seed an emptied cluster on the point farthest from its center.
                worst = int(d2[np.arange(X.shape[0]), labels].argmax())
                centers[i] = X[worst]
                labels[worst] = i
    d2 = pairwise_sq_dists(X, centers)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(X.shape[0]), labels].sum())
    trace.append(inertia)
    return labels, centers, inertia, trace


def _kmeans(
    X: np.ndarray, config: ClusterConfig
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """Best of `restarts` k-means++ / Lloyd runs, chosen by final inertia."""
    best = None
    for restart in range(config.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, restart)))
        centers = _kmeans_pp_init(X, config.n_clusters, rng)
        labels, centers, inertia, trace = _lloyd(X, centers, config.max_iter)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia, trace)
    return best


# ---------------------------------------------------------------------------
# Gaussian mixture, diagonal covariances


def _log_gaussian_diag(X: np.ndarray, means: np.ndarray, variances: np.ndarray) -> np.ndarray:
    # (n, k) log densities for diagonal Gaussians.
    n, d = X.shape
    out = np.empty((n, means.shape[0]))
    for i in range(means.shape[0]):
        diff2 = (X - means[i]) ** 2
        out[:, i] = -0.5 * (
            d * np.log(2.0 * np.pi) + np.log(variances[i]).sum() + (diff2 / variances[i]).sum(axis=1)
        )
    return out


def _gmm(X: np.ndarray, config: ClusterConfig) -> ClusterAssignment:
    k = config.n_clusters
    labels, _, _, _ = _kmeans(X, config)
    means = np.empty((k, X.shape[1]))
    variances = np.empty((k, X.shape[1]))
    weights = np.empty(k)
    for i in range(k):
        members = labels == i
        if not members.any():
            members = np.ones(X.shape[0], dtype=bool)
        means[i] = X[members].mean(axis=0)
        variances[i] = np.maximum(X[members].var(axis=0), _GMM_VAR_FLOOR)
        weights[i] = members.mean()
    weights = np.maximum(weights, 1e-12)
    weights /= weights.sum()

    trace: list[float] = []
    resp = None
    for _ in range(_GMM_MAX_ITER):
        log_prob = _log_gaussian_diag(X, means, variances) + np.log(weights)[None, :]
        log_norm = _logsumexp(log_prob)
        log_likelihood = float(log_norm.sum())
        resp = np.exp(log_prob - log_norm[:, None])
        if trace and log_likelihood - trace[-1] < _GMM_TOL:
            trace.append(log_likelihood)
            break
        trace.append(log_likelihood)
        mass = resp.sum(axis=0)
        mass = np.maximum(mass, 1e-12)
        weights = mass / mass.sum()
        means = (resp.T @ X) / mass[:, None]
        for i in range(k):
            diff2 = (X - means[i]) ** 2
            variances[i] = np.maximum((resp[:, i] @ diff2) / mass[i], _GMM_VAR_FLOOR)
    labels = resp.argmax(axis=1)
    return ClusterAssignment(labels, trace[-1], trace)


def _logsumexp(a: np.ndarray) -> np.ndarray:
    peak = a.max(axis=1, keepdims=True)
    return (peak + np.log(np.exp(a - peak).sum(axis=1, keepdims=True)))[:, 0]


# ---------------------------------------------------------------------------
# Spectral clustering (normalized Laplacian, k-means on row-normalized rows)


def _spectral(X: np.ndarray, config: ClusterConfig) -> ClusterAssignment:
    gamma = config.affinity_gamma
    if gamma is None:
        gamma = reduce_mod.default_gamma(X)
    affinity = np.exp(-gamma * pairwise_sq_dists(X))
    np.fill_diagonal(affinity, 0.0)
    degrees = affinity.sum(axis=1)
    degrees = np.maximum(degrees, 1e-300)
    inv_sqrt = 1.0 / np.sqrt(degrees)
    M = affinity * inv_sqrt[:, None] * inv_sqrt[None, :]
    _, vectors = symmetric_eig(M)
    rows = vectors[:, : config.n_clusters]
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    rows = rows / np.maximum(norms, 1e-300)
    labels, _, inertia, trace = _kmeans(rows, config)
    return ClusterAssignment(labels, inertia, trace)


# ---------------------------------------------------------------------------
# Ward agglomeration


def _agglomerative(X: np.ndarray, config: ClusterConfig) -> ClusterAssignment:
    """Ward linkage via Lance-Williams updates.

    Ties in the next-merge choice break on the smallest (i, j) pair, with
    clusters numbered by creation order, so the dendrogram is deterministic.
    """
    n = X.shape[0]
    k = config.n_clusters
    cost = np.full((n, n), np.inf)
    d2 = pairwise_sq_dists(X)
    iu = np.triu_indices(n, k=1)
    cost[iu] = 0.5 * d2[iu]
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    parent = np.arange(n)
    merge_costs: list[float] = []

    for _ in range(n - k):
        flat = int(np.argmin(cost))
        i, j = divmod(flat, n)
        merge_costs.append(float(cost[i, j]))
        # Lance-Williams update of Ward costs against every other cluster.
        others = np.flatnonzero(active)
        others = others[(others != i) & (others != j)]
        if others.size:
            d_ai = np.where(others < i, cost[others, i], cost[i, others])
            d_aj = np.where(others < j, cost[others, j], cost[j, others])
            s = sizes[others]
            new = ((sizes[i] + s) * d_ai + (sizes[j] + s) * d_aj - s * cost[i, j]) / (
                sizes[i] + sizes[j] + s
            )
            lo = np.minimum(others, i)
            hi = np.maximum(others, i)
            cost[lo, hi] = new
        sizes[i] += sizes[j]
        active[j] = False
        parent[parent == j] = i
        cost[j, :] = np.inf
        cost[:, j] = np.inf

    # Relabel surviving clusters 0..k-1 by smallest member index.
    labels = np.empty(n, dtype=np.int64)
    next_label = 0
    seen: dict[int, int] = {}
    for idx in range(n):
        root = parent[idx]
        if root not in seen:
            seen[root] = next_label
            next_label += 1
        labels[idx] = seen[root]
    return ClusterAssignment(labels, float(sum(merge_costs)), merge_costs)


# ---------------------------------------------------------------------------
# The sweep grid

SWEEP_HEADER = "reduction,method,adjusted_rand,adjusted_mutual_info,status"


@dataclass(frozen=True)
class SweepCell:
    reduction: str
    method: str
    adjusted_rand: float | None
    adjusted_mutual_info: float | None
    status: str


def clustering_sweep(
    X,
    labels: Sequence,
    *,
    reductions: Sequence[str] = SWEEP_REDUCTIONS,
    methods: Sequence[str] = CLUSTER_METHODS,
    k: int = 20,
    n_clusters: int = 2,
    n_neighbors: int = 10,
    seed: int = 0,
    restarts: int = 10,
) -> list[SweepCell]:
    """Cluster every reduction of X with every method and score against labels.

    A failing cell (for example a reducer that cannot converge) is recorded
    with its error message instead of aborting the grid.
    """
    if isinstance(X, FeatureMatrix):
        X = X.values
    data = np.asarray(X, dtype=float)
    y = np.asarray(labels)
    if y.shape[0] != data.shape[0]:
        raise ValueError("labels length does not match the matrix")

    cells: list[SweepCell] = []
    for r_idx, reduction in enumerate(reductions):
        if reduction == "none":
            reduced, fit_error = data, None
        else:
            try:
                fit_seed = _derived_seed(seed, r_idx, 0)
                model = reduce_mod.fit_reducer(
                    reduction, data, min(k, data.shape[0] - 1), n_neighbors=n_neighbors, seed=fit_seed
                )
                reduced = reduce_mod.transform(model, data).values
                fit_error = None
            except Exception as exc:  # recorded, not raised: the grid must finish
                reduced, fit_error = None, f"failed: {exc}"
        for m_idx, method in enumerate(methods):
            if fit_error is not None:
                cells.append(SweepCell(reduction, method, None, None, fit_error))
                continue
            try:
                config = ClusterConfig(
                    method=method,
                    n_clusters=n_clusters,
                    seed=_derived_seed(seed, r_idx, m_idx + 1),
                    restarts=restarts,
                )
                assignment = fit_clusters(config, reduced)
                ari = adjusted_rand(y, assignment.labels)
                ami = adjusted_mutual_info(y, assignment.labels)
                cells.append(SweepCell(reduction, method, ari, ami, "ok"))
            except Exception as exc:
                cells.append(SweepCell(reduction, method, None, None, f"failed: {exc}"))
    return cells


def _derived_seed(seed: int, r_idx: int, m_idx: int) -> int:
    return int(np.random.SeedSequence((seed, r_idx, m_idx)).generate_state(1)[0])


def write_sweep(cells: Sequence[SweepCell], path: str | Path) -> None:
    lines = [SWEEP_HEADER]
    for cell in cells:
        ari = "" if cell.adjusted_rand is None else "%.17g" % cell.adjusted_rand
        ami = "" if cell.adjusted_mutual_info is None else "%.17g" % cell.adjusted_mutual_info
        status = cell.status.replace(",", ";").replace("\n", " ")
        lines.append(f"{cell.reduction},{cell.method},{ari},{ami},{status}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
