import numpy as np
import pytest

from refractory.cluster import (
    AGGLOMERATIVE,
    CLUSTER_METHODS,
    GMM,
    KMEANS,
    SPECTRAL,
    SWEEP_REDUCTIONS,
    ClusterConfig,
    SweepCell,
    clustering_sweep,
    fit_clusters,
    write_sweep,
)
from refractory.metrics import adjusted_rand


def _three_blobs(n_per=20, gap=12.0, seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [gap, 0.0], [0.0, gap]])
    X = np.vstack([rng.normal(scale=0.4, size=(n_per, 2)) + c for c in centers])
    y = np.repeat(np.arange(3), n_per)
    return X, y


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_separated_blobs_recovered_exactly(method):
    X, y = _three_blobs()
    out = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=1), X)
    assert adjusted_rand(y, out.labels) == 1.0


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_single_cluster_is_all_zeros(method):
    X, _ = _three_blobs(n_per=5)
    out = fit_clusters(ClusterConfig(method=method, n_clusters=1, seed=0), X)
    np.testing.assert_array_equal(out.labels, 0)


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_duplicate_rows_share_labels(method):
    X, _ = _three_blobs(n_per=8, seed=2)
    X = np.vstack([X, X[:4]])  # exact duplicates of the first four rows
    out = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=0), X)
    np.testing.assert_array_equal(out.labels[-4:], out.labels[:4])


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_labels_are_contiguous_ints(method):
    X, _ = _three_blobs(n_per=10, seed=3)
    out = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=0), X)
    assert out.labels.shape == (30,)
    assert set(np.unique(out.labels)) <= set(range(3))


def test_kmeans_inertia_trace_non_increasing():
    X, _ = _three_blobs(gap=3.0, seed=4)
    out = fit_clusters(ClusterConfig(method=KMEANS, n_clusters=3, seed=5), X)
    trace = np.asarray(out.trace)
    assert len(trace) >= 1
    assert np.all(np.diff(trace) <= 1e-9)
    assert abs(out.objective - trace[-1]) < 1e-9


def test_kmeans_inertia_matches_direct_computation():
    X, _ = _three_blobs(seed=5)
    out = fit_clusters(ClusterConfig(method=KMEANS, n_clusters=3, seed=0), X)
    inertia = 0.0
    for c in range(3):
        pts = X[out.labels == c]
        inertia += ((pts - pts.mean(axis=0)) ** 2).sum()
    assert abs(out.objective - inertia) < 1e-8


def test_gmm_log_likelihood_trace_non_decreasing():
    X, _ = _three_blobs(gap=4.0, seed=6)
    out = fit_clusters(ClusterConfig(method=GMM, n_clusters=3, seed=7), X)
    trace = np.asarray(out.trace)
    assert len(trace) >= 2
    assert np.all(np.diff(trace) >= -1e-8)


def test_agglomerative_merge_costs_non_decreasing():
    X, _ = _three_blobs(gap=2.0, seed=8)
    out = fit_clusters(ClusterConfig(method=AGGLOMERATIVE, n_clusters=2, seed=0), X)
    trace = np.asarray(out.trace)
    assert len(trace) == len(X) - 2  # merges until two groups remain
    assert np.all(np.diff(trace) >= -1e-9)


def test_agglomerative_deterministic_without_seed_dependence():
    X, _ = _three_blobs(n_per=10, seed=9)
    a = fit_clusters(ClusterConfig(method=AGGLOMERATIVE, n_clusters=3, seed=0), X)
    b = fit_clusters(ClusterConfig(method=AGGLOMERATIVE, n_clusters=3, seed=99), X)
    np.testing.assert_array_equal(a.labels, b.labels)


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_row_permutation_equivalent_partition(method):
    X, _ = _three_blobs(n_per=10, seed=10)
    rng = np.random.default_rng(11)
    perm = rng.permutation(len(X))
    base = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=0), X)
    shuffled = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=0), X[perm])
    assert adjusted_rand(base.labels[perm], shuffled.labels) == 1.0


@pytest.mark.parametrize("method", CLUSTER_METHODS)
def test_deterministic_given_seed(method):
    X, _ = _three_blobs(n_per=10, gap=1.0, seed=12)
    a = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=4), X)
    b = fit_clusters(ClusterConfig(method=method, n_clusters=3, seed=4), X)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_too_many_clusters_rejected():
    X = np.zeros((3, 2))
    with pytest.raises(ValueError):
        fit_clusters(ClusterConfig(method=KMEANS, n_clusters=4), X)


def test_config_validation():
    with pytest.raises(ValueError):
        ClusterConfig(method="DBSCAN")
    with pytest.raises(ValueError):
        ClusterConfig(method=KMEANS, n_clusters=0)
    with pytest.raises(ValueError):
        ClusterConfig(method=KMEANS, restarts=0)


def test_non_finite_rows_rejected():
    X = np.array([[0.0, np.inf], [1.0, 2.0]])
    with pytest.raises(ValueError):
        fit_clusters(ClusterConfig(method=KMEANS, n_clusters=1), X)


def test_sweep_covers_full_grid():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(24, 6))
    y = rng.integers(0, 2, size=24)
    cells = clustering_sweep(X, y, k=3, n_neighbors=5, seed=0, restarts=2)
    assert len(cells) == len(SWEEP_REDUCTIONS) * len(CLUSTER_METHODS)
    seen = {(c.reduction, c.method) for c in cells}
    assert len(seen) == len(cells)
    for cell in cells:
        if cell.status == "ok":
            assert cell.adjusted_rand is not None
            assert -1.0 <= cell.adjusted_rand <= 1.0
        else:
            assert cell.adjusted_rand is None


def test_sweep_records_reducer_failure_instead_of_raising():
    # Two far-apart clumps with n_neighbors=1 disconnect the ISOMAP graph.
    X = np.vstack([np.zeros((6, 2)), np.full((6, 2), 50.0)])
    X = X + np.arange(12)[:, None] * 0.01
    y = np.repeat([0, 1], 6)
    cells = clustering_sweep(
        X, y, reductions=("ISOMAP",), k=2, n_neighbors=1, seed=0, restarts=2
    )
    assert len(cells) == len(CLUSTER_METHODS)
    for cell in cells:
        assert cell.status.startswith("failed:")
        assert cell.adjusted_rand is None and cell.adjusted_mutual_info is None


def test_sweep_perfect_structure_scores_one():
    X, y = _three_blobs(n_per=10)
    cells = clustering_sweep(
        X, y, reductions=("none", "PCA"), methods=(KMEANS,), k=2,
        n_clusters=3, seed=0, restarts=3,
    )
    for cell in cells:
        assert cell.status == "ok"
        assert cell.adjusted_rand == 1.0
        assert cell.adjusted_mutual_info == pytest.approx(1.0, abs=1e-12)


def test_sweep_label_length_mismatch():
    with pytest.raises(ValueError):
        clustering_sweep(np.zeros((4, 2)), [0, 1])


def test_write_sweep_format(tmp_path):
    cells = [
        SweepCell("PCA", KMEANS, 0.5, 0.25, "ok"),
        SweepCell("ISOMAP", GMM, None, None, "failed: graph, in 2 pieces"),
    ]
    path = tmp_path / "sweep.csv"
    write_sweep(cells, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "reduction,method,adjusted_rand,adjusted_mutual_info,status"
    assert lines[1] == "PCA,KMEANS,0.5,0.25,ok"
    # commas inside a status message are sanitized to keep the CSV parseable
    assert lines[2] == "ISOMAP,GMM,,,failed: graph; in 2 pieces"
