"""
Seeded k-means (k-means++ initialization, Lloyd iterations).

Input vectors are put in lexicographic order before initialization, so the
result for a given seed does not depend on input order. Assignment ties go
to the lowest cluster index.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ClusteringError
from ..features import FeatureVector
from ..utils import child_seeds
from .metrics import between_distance, within_distance


logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 300
_MONOTONE_RTOL = 1e-9

Vectors = Sequence[FeatureVector] | Sequence[np.ndarray] | np.ndarray


def as_matrix(vectors: Vectors) -> np.ndarray:
    """Stack vectors into an N x D float matrix, rejecting mixed lengths."""
    if isinstance(vectors, np.ndarray):
        matrix = np.array(vectors, dtype=np.float64)
        if matrix.ndim == 1:
            matrix = matrix[:, None]
    else:
        rows = [v.phi if isinstance(v, FeatureVector) else np.ravel(v) for v in vectors]
        if not rows:
            raise ClusteringError("no vectors to cluster")
        lengths = {r.shape[0] for r in rows}
        if len(lengths) != 1:
            raise ClusteringError(f"vectors have mixed lengths {sorted(lengths)}")
        matrix = np.vstack(rows).astype(np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ClusteringError("no vectors to cluster")
    if not np.all(np.isfinite(matrix)):
        raise ClusteringError("vectors contain non-finite values")
    return matrix


@dataclass(frozen=True, eq=False)
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    objective: float
    lambda_w: float | None
    lambda_b: float | None
    seed: int
    n_iter: int = 0

    def __post_init__(self) -> None:
        centroids = np.array(self.centroids, dtype=np.float64)
        assignments = np.array(self.assignments, dtype=np.int64)
        centroids.setflags(write=False)
        assignments.setflags(write=False)
        object.__setattr__(self, "centroids", centroids)
        object.__setattr__(self, "assignments", assignments)

    @property
    def n_points(self) -> int:
        return self.assignments.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def sum_of_squares(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    return float(((X - centroids[labels]) ** 2).sum())


def _kmeans_plusplus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = cdist(X, X[chosen[0]][None, :], metric="sqeuclidean").ravel()
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            cumulative = np.cumsum(closest)
            idx = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        closest = np.minimum(closest, cdist(X, X[idx][None, :], metric="sqeuclidean").ravel())
    return X[chosen].copy()


def _repair_empty(labels: np.ndarray, distances: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point farthest from its centroid (donor keeps >= 1 point)."""
    labels = labels.copy()
    cost = distances[np.arange(labels.shape[0]), labels].copy()
    for cluster in range(k):
        sizes = np.bincount(labels, minlength=k)
        if sizes[cluster] > 0:
            continue
        movable = sizes[labels] > 1
        if not movable.any():
            raise ClusteringError("cannot fill empty cluster: every cluster is a singleton")
        idx = int(np.argmax(np.where(movable, cost, -np.inf)))
        labels[idx] = cluster
        cost[idx] = 0.0
    return labels


def _update_centroids(X: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    return np.vstack([X[labels == c].mean(axis=0) for c in range(k)])


def _lloyd(
    X: np.ndarray, k: int, seed: int, max_iter: int
) -> tuple[np.ndarray, np.ndarray, float, int]:
    rng = np.random.default_rng(seed)
    centroids = _kmeans_plusplus(X, k, rng)
    labels: np.ndarray | None = None
    objective = np.inf
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        distances = cdist(X, centroids, metric="sqeuclidean")
        new_labels = _repair_empty(distances.argmin(axis=1), distances, k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centroids = _update_centroids(X, labels, k)
        new_objective = sum_of_squares(X, labels, centroids)
        if new_objective > objective + _MONOTONE_RTOL * max(objective, 1.0):
            raise ClusteringError(
                f"k-means objective increased from {objective} to {new_objective}"
                f" at iteration {n_iter}"
            )
        logger.debug("k-means k=%d iter %d objective %.6g", k, n_iter, new_objective)
        objective = new_objective
    assert labels is not None
    return centroids, labels, float(objective), n_iter


def _quality_or_none(
    X: np.ndarray, labels: np.ndarray, centroids: np.ndarray
) -> tuple[float | None, float | None]:
    k = centroids.shape[0]
    n = X.shape[0]
    lambda_w = within_distance(X, labels, centroids) if n > k else None
    lambda_b = between_distance(X, labels, centroids) if k >= 2 else None
    return lambda_w, lambda_b


def kmeans_fit(
    vectors: Vectors,
    k: int,
    seed: int = 0,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    n_init: int = 1,
) -> ClusterModel:
    """
    Cluster N vectors into k groups.

    One run is k-means++ seeding followed by Lloyd iterations, which stops at
    a local optimum: on small instances a single run matches the exhaustive
    optimum only about half the time, so near-optimal partitions need
    restarts. With `n_init > 1` the first run uses `seed` and the others use
    child seeds of it; the lowest objective wins (earliest on ties), so more
    restarts never give a worse objective than `n_init=1`.
    """
    X = as_matrix(vectors)
    n = X.shape[0]
    if k < 1:
        raise ClusteringError(f"k must be positive, got {k}")
    if k > n:
        raise ClusteringError(f"k={k} exceeds the number of vectors N={n}")
    if n_init < 1:
        raise ClusteringError("n_init must be at least 1")

    order = np.lexsort(X.T[::-1])
    X_sorted = X[order]
    run_seeds = [seed] + (child_seeds(seed, n_init - 1) if n_init > 1 else [])

    best: tuple[np.ndarray, np.ndarray, float, int] | None = None
    for run_seed in run_seeds:
        result = _lloyd(X_sorted, k, run_seed, max_iter)
        if best is None or result[2] < best[2]:
            best = result
    assert best is not None
    centroids, sorted_labels, objective, n_iter = best

    labels = np.empty(n, dtype=np.int64)
    labels[order] = sorted_labels
    lambda_w, lambda_b = _quality_or_none(X, labels, centroids)
    return ClusterModel(
        k=k,
        centroids=centroids,
        assignments=labels,
        objective=objective,
        lambda_w=lambda_w,
        lambda_b=lambda_b,
        seed=seed,
        n_iter=n_iter,
    )
