"""
Tests for encprim k-means, cluster quality, the elbow sweep and cluster I/O
"""

import math

import numpy as np
import pytest

from encprim.clustering import (
    SweepRow,
    cluster_distribution,
    cluster_members,
    cluster_quality,
    detect_elbow,
    elbow_sweep,
    kmeans_fit,
    read_assignments,
    read_sweep_csv,
    representative_members,
    write_cluster_model,
    write_sweep_csv,
)
from encprim.errors import ClusteringError
from encprim.features import FeatureVector
from encprim.synthetic import make_blobs, oracle_kmeans

FOUR_POINTS = np.array([0.0, 0.1, 10.0, 10.1])


@pytest.fixture(scope="module")
def blobs():
    points, _ = make_blobs(n_blobs=5, per_blob=20, dim=2, spread=0.3, seed=0)
    return points


@pytest.fixture(scope="module")
def blob_sweep(blobs):
    return elbow_sweep(blobs, 2, 10, seeds_per_k=5, seed=1, n_init=3)


class TestKMeans:
    """Tests for seeded k-means."""

    def test_four_points(self):
        """Test {0, 0.1, 10, 10.1} with k = 2."""
        model = kmeans_fit(FOUR_POINTS, 2, seed=0)
        assert model.assignments[0] == model.assignments[1]
        assert model.assignments[2] == model.assignments[3]
        assert model.assignments[0] != model.assignments[2]
        np.testing.assert_allclose(np.sort(model.centroids.ravel()), [0.05, 10.05])
        assert model.objective == pytest.approx(0.01)

    def test_k_equals_n(self):
        """Test singleton clusters have zero objective."""
        model = kmeans_fit(FOUR_POINTS, 4, seed=3)
        assert model.objective == 0.0
        assert sorted(model.assignments.tolist()) == [0, 1, 2, 3]
        assert model.lambda_w is None

    def test_k_equals_one(self):
        """Test the single-cluster closed form."""
        rng = np.random.default_rng(0)
        X = rng.normal(size=(25, 3))
        model = kmeans_fit(X, 1, seed=5)
        np.testing.assert_allclose(model.centroids[0], X.mean(axis=0))
        assert model.objective == pytest.approx(((X - X.mean(axis=0)) ** 2).sum())
        assert model.lambda_b is None

    def test_deterministic(self, blobs):
        """Test identical results for identical seeds."""
        first = kmeans_fit(blobs, 5, seed=11)
        second = kmeans_fit(blobs, 5, seed=11)
        np.testing.assert_array_equal(first.assignments, second.assignments)
        np.testing.assert_array_equal(first.centroids, second.centroids)
        assert first.objective == second.objective

    def test_input_order_invariant(self, blobs):
        """Test that permuting the input permutes the assignments."""
        perm = np.random.default_rng(1).permutation(blobs.shape[0])
        original = kmeans_fit(blobs, 4, seed=2)
        permuted = kmeans_fit(blobs[perm], 4, seed=2)
        np.testing.assert_array_equal(permuted.assignments, original.assignments[perm])
        assert permuted.objective == original.objective

    def test_no_empty_clusters(self):
        """Test that duplicated points still fill every cluster."""
        X = np.repeat(np.array([[0.0, 0.0], [1.0, 1.0]]), 5, axis=0)
        model = kmeans_fit(X, 4, seed=0)
        assert np.all(model.sizes() > 0)

    def test_accepts_feature_vectors(self):
        """Test clustering FeatureVector objects."""
        vectors = [FeatureVector(phi=np.full(8, v)) for v in (0.0, 0.1, 0.9, 1.0)]
        model = kmeans_fit(vectors, 2, seed=0)
        assert model.assignments[0] == model.assignments[1] != model.assignments[2]

    def test_rejects_bad_input(self):
        """Test k > N and mixed vector lengths."""
        with pytest.raises(ClusteringError):
            kmeans_fit(FOUR_POINTS, 5)
        with pytest.raises(ClusteringError, match="mixed lengths"):
            kmeans_fit([np.zeros(8), np.zeros(18)], 1)
        with pytest.raises(ClusteringError):
            kmeans_fit([], 1)

    def test_agrees_with_exhaustive_search(self):
        """Test k-means optima against brute-force enumeration on small instances."""
        rng = np.random.default_rng(2024)
        matches = 0
        for trial in range(50):
            n = int(rng.integers(6, 11))
            k = int(rng.integers(2, 4))
            X = rng.normal(size=(n, 2))
            oracle = oracle_kmeans(X, k)
            model = kmeans_fit(X, k, seed=trial, n_init=10)
            assert model.objective >= oracle.objective - 1e-9
            matches += model.objective <= oracle.objective + 1e-9
        assert matches >= 45

    def test_restarts_never_worse(self):
        """Test that extra initializations only lower the objective for the same seed."""
        rng = np.random.default_rng(77)
        for trial in range(20):
            X = rng.normal(size=(int(rng.integers(6, 30)), 3))
            k = int(rng.integers(2, 5))
            single = kmeans_fit(X, k, seed=trial)
            restarted = kmeans_fit(X, k, seed=trial, n_init=10)
            assert restarted.objective <= single.objective
            if restarted.objective == single.objective:
                np.testing.assert_array_equal(restarted.assignments, single.assignments)


class TestQuality:
    """Tests for within- and between-cluster distances."""

    def test_hand_example(self):
        """Test two duplicated points per cluster at 0 and 1."""
        X = np.array([0.0, 0.0, 1.0, 1.0])
        model = kmeans_fit(X, 2, seed=0)
        lambda_w, lambda_b = cluster_quality(model, X)
        assert lambda_w == 0.0
        assert lambda_b == pytest.approx(1.0)
        assert (model.lambda_w, model.lambda_b) == (lambda_w, lambda_b)

    def test_identical_points(self):
        """Test zero spread everywhere."""
        X = np.ones((6, 3))
        model = kmeans_fit(X, 3, seed=4)
        assert cluster_quality(model, X) == (0.0, 0.0)

    def test_direct_formulas(self):
        """Test against an independent evaluation of both formulas."""
        rng = np.random.default_rng(30)
        X = rng.normal(size=(30, 4))
        model = kmeans_fit(X, 4, seed=6)
        grand = X.mean(axis=0)
        within = 0.0
        between = 0.0
        for c in range(4):
            members = X[model.assignments == c]
            mu = members.mean(axis=0)
            within += sum(float(np.dot(x - mu, x - mu)) for x in members)
            between += len(members) * float(np.dot(mu - grand, mu - grand))
        lambda_w, lambda_b = cluster_quality(model, X)
        assert lambda_w == pytest.approx(within / 26, abs=1e-9)
        assert lambda_b == pytest.approx(between / 3, abs=1e-9)

    def test_undefined_cases(self):
        """Test k = 1 and k = N."""
        with pytest.raises(ClusteringError):
            cluster_quality(kmeans_fit(FOUR_POINTS, 1), FOUR_POINTS)
        with pytest.raises(ClusteringError):
            cluster_quality(kmeans_fit(FOUR_POINTS, 4), FOUR_POINTS)


class TestElbowSweep:
    """Tests for the k sweep and elbow detection."""

    def test_rows(self, blob_sweep):
        """Test one row per k with deltas from the previous row."""
        assert [r.k for r in blob_sweep] == list(range(2, 11))
        assert math.isnan(blob_sweep[0].d_lambda_w)
        assert math.isnan(blob_sweep[0].d_lambda_b)
        for previous, row in zip(blob_sweep, blob_sweep[1:]):
            assert row.d_lambda_w == pytest.approx(row.lambda_w - previous.lambda_w)
            assert row.d_lambda_b == pytest.approx(row.lambda_b - previous.lambda_b)

    def test_elbow_at_blob_count(self, blob_sweep):
        """Test that five planted blobs give the knee at k = 5."""
        assert detect_elbow(blob_sweep) == 5

    def test_objective_drops_then_flattens(self, blob_sweep):
        """Test median objectives never rise with k and flatten after the blob count."""
        objective = {r.k: r.objective for r in blob_sweep}
        for k in range(2, 10):
            assert objective[k + 1] <= objective[k] * (1 + 1e-9)
        assert objective[4] - objective[5] > 10 * (objective[5] - objective[10])

    def test_deterministic(self, blobs, blob_sweep):
        """Test that the sweep is reproducible from its seed."""
        again = elbow_sweep(blobs, 2, 10, seeds_per_k=5, seed=1, n_init=3)
        assert [r.objective for r in again] == [r.objective for r in blob_sweep]

    def test_parallel_matches_serial(self, blobs):
        """Test that worker processes do not change results."""
        serial = elbow_sweep(blobs, 2, 4, seeds_per_k=2, seed=7)
        parallel = elbow_sweep(blobs, 2, 4, seeds_per_k=2, seed=7, jobs=2)
        assert [r.objective for r in parallel] == [r.objective for r in serial]

    def test_range_checks(self, blobs):
        """Test invalid k ranges."""
        with pytest.raises(ClusteringError):
            elbow_sweep(blobs, 1, 5)
        with pytest.raises(ClusteringError):
            elbow_sweep(blobs, 5, 5)
        with pytest.raises(ClusteringError):
            elbow_sweep(blobs[:6], 2, 6)

    def test_detect_elbow_edge_cases(self):
        """Test short and flat curves."""
        rows = [SweepRow(k, 0.0, 0.0, 10.0) for k in (2, 3)]
        assert detect_elbow(rows) is None
        flat = [SweepRow(k, 0.0, 0.0, 1.0) for k in (2, 3, 4, 5)]
        assert detect_elbow(flat) is None
        rising = [SweepRow(k, 0.0, 0.0, float(k)) for k in (2, 3, 4, 5)]
        assert detect_elbow(rising) is None

    def test_elbow_where_drops_flatten(self):
        """Test the k after which drops become small, not the first sharp bend."""
        objective = [100.0, 24.0, 8.5, 0.5, 0.4, 0.3, 0.2]
        rows = [SweepRow(k, 0.0, 0.0, j) for k, j in zip(range(2, 9), objective)]
        assert detect_elbow(rows) == 5

    @pytest.mark.parametrize("blob_seed", [1, 2, 3, 4])
    def test_elbow_across_blob_layouts(self, blob_seed):
        """Test the elbow stays at the blob count for other planted layouts."""
        points, _ = make_blobs(n_blobs=5, per_blob=20, dim=2, spread=0.3, seed=blob_seed)
        rows = elbow_sweep(points, 2, 10, seeds_per_k=5, seed=1, n_init=3)
        assert detect_elbow(rows) == 5

    def test_sweep_csv_round_trip(self, tmp_path, blob_sweep):
        """Test sweep.csv columns and NaN deltas."""
        path = write_sweep_csv(blob_sweep, tmp_path / "sweep.csv")
        header = "k,lambda_w,lambda_b,objective,d_lambda_w,d_lambda_b"
        assert path.read_text().splitlines()[0] == header
        rows = read_sweep_csv(path)
        assert [r.objective for r in rows] == [r.objective for r in blob_sweep]
        assert math.isnan(rows[0].d_lambda_w)


class TestDistribution:
    """Tests for cluster shares, members and I/O."""

    def test_four_equal_blobs(self):
        """Test four equal blobs give four shares of 0.25."""
        points, _ = make_blobs(n_blobs=4, per_blob=10, dim=3, seed=2)
        model = kmeans_fit(points, 4, seed=0, n_init=5)
        shares = cluster_distribution(model)
        assert [s.count for s in shares] == [10, 10, 10, 10]
        assert [s.fraction for s in shares] == [0.25] * 4

    def test_single_cluster(self):
        """Test k = 1."""
        shares = cluster_distribution(kmeans_fit(FOUR_POINTS, 1))
        assert len(shares) == 1
        assert shares[0].fraction == 1.0

    def test_fractions_match_counts(self, blobs):
        """Test internal consistency of shares."""
        shares = cluster_distribution(kmeans_fit(blobs, 7, seed=3))
        total = sum(s.count for s in shares)
        assert total == blobs.shape[0]
        for share in shares:
            assert abs(share.fraction - share.count / total) <= 1e-12

    def test_members_and_representatives(self):
        """Test member lists and the member nearest each centroid."""
        X = np.array([0.0, 0.1, 0.3, 10.0, 10.1])
        model = kmeans_fit(X, 2, seed=0)
        members = cluster_members(model)
        assert sorted(np.concatenate(members).tolist()) == [0, 1, 2, 3, 4]
        representatives = representative_members(model, X)
        low = int(model.assignments[0])
        assert representatives[low] == 1
        assert representatives[1 - low] in (3, 4)

    def test_write_cluster_model(self, tmp_path):
        """Test centroids.csv and assignments.csv."""
        model = kmeans_fit(FOUR_POINTS, 2, seed=0)
        identities = [("a", 0, 4, 1), ("a", 5, 9, 2), ("b", 0, 3, 0), ("b", 4, 8, 1)]
        centroids_path, assignments_path = write_cluster_model(model, identities, tmp_path)
        assert centroids_path.read_text().splitlines()[0] == "f0"
        frame = read_assignments(assignments_path)
        assert list(frame.columns) == ["encounter_id", "m", "n", "label", "cluster"]
        assert frame["cluster"].tolist() == model.assignments.tolist()
        with pytest.raises(ClusteringError):
            write_cluster_model(model, identities[:3], tmp_path)
