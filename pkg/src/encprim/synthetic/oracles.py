"""
Brute-force references for tests: label-permutation accuracy, exhaustive
k-means, and planted blobs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import OracleError, ScenarioError, SegmentationError
from ..segmentation import StateSequence
from .generator import LabeledEncounter


ORACLE_MAX_POINTS = 12
ORACLE_MAX_K = 3
_BATCH = 1 << 16


def segmentation_accuracy(
    pred: StateSequence | np.ndarray, truth: LabeledEncounter | np.ndarray
) -> float:
    """Best per-sample agreement over one-to-one mappings of predicted to true labels."""
    pred_labels = np.asarray(pred.labels if isinstance(pred, StateSequence) else pred)
    truth_labels = np.asarray(truth.truth_labels if isinstance(truth, LabeledEncounter) else truth)
    if pred_labels.shape != truth_labels.shape:
        raise SegmentationError(
            f"prediction has {pred_labels.size} labels, truth has {truth_labels.size}"
        )
    if pred_labels.size == 0:
        raise SegmentationError("cannot score an empty sequence")
    _, pred_idx = np.unique(pred_labels, return_inverse=True)
    _, truth_idx = np.unique(truth_labels, return_inverse=True)
    contingency = np.zeros((pred_idx.max() + 1, truth_idx.max() + 1), dtype=np.int64)
    np.add.at(contingency, (pred_idx, truth_idx), 1)
    rows, cols = linear_sum_assignment(contingency, maximize=True)
    return float(contingency[rows, cols].sum() / pred_labels.size)


@dataclass(frozen=True, eq=False)
class OraclePartition:
    labels: np.ndarray  # canonical: blocks numbered by first appearance
    objective: float


def _canonical(labels: np.ndarray) -> np.ndarray:
    mapping: dict[int, int] = {}
    return np.array([mapping.setdefault(int(v), len(mapping)) for v in labels], dtype=np.int64)


def oracle_kmeans(vectors: np.ndarray, k: int) -> OraclePartition:
    """Global minimum of the k-means objective over all partitions into k nonempty blocks."""
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n > ORACLE_MAX_POINTS or k > ORACLE_MAX_K:
        raise OracleError(
            f"exhaustive k-means handles N <= {ORACLE_MAX_POINTS}, k <= {ORACLE_MAX_K};"
            f" got N={n}, k={k}"
        )
    if not 1 <= k <= n:
        raise OracleError(f"need 1 <= k <= N, got k={k}, N={n}")

    sq_norms = (X**2).sum(axis=1)
    best_cost = np.inf
    best_labels: np.ndarray | None = None
    total = k**n
    powers = k ** np.arange(n - 1, -1, -1)
    for start in range(0, total, _BATCH):
        codes = np.arange(start, min(start + _BATCH, total))
        labels = (codes[:, None] // powers) % k
        cost = np.zeros(codes.shape[0])
        valid = np.ones(codes.shape[0], dtype=bool)
        for c in range(k):
            mask = (labels == c).astype(np.float64)
            counts = mask.sum(axis=1)
            valid &= counts > 0
            sums = mask @ X
            safe = np.where(counts > 0, counts, 1.0)
            cost += mask @ sq_norms - (sums**2).sum(axis=1) / safe
        cost = np.where(valid, cost, np.inf)
        i = int(np.argmin(cost))
        if cost[i] < best_cost:
            best_cost, best_labels = cost[i], labels[i]
    assert best_labels is not None

    labels = _canonical(best_labels)
    centroids = np.vstack([X[labels == c].mean(axis=0) for c in range(k)])
    return OraclePartition(labels=labels, objective=float(((X - centroids[labels]) ** 2).sum()))


def make_blobs(
    n_blobs: int = 5,
    per_blob: int = 20,
    dim: int = 2,
    spread: float = 0.3,
    seed: int = 0,
    *,
    min_separation: float = 5.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Isotropic Gaussian blobs whose centers are at least `min_separation` apart."""
    if n_blobs < 1 or per_blob < 1 or dim < 1:
        raise ScenarioError("blob counts and dimension must be positive")
    rng = np.random.default_rng(seed)
    scale = min_separation * max(n_blobs, 2)
    for _ in range(1000):
        centers = rng.uniform(-scale, scale, (n_blobs, dim))
        gaps = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
        if n_blobs == 1 or gaps[np.triu_indices(n_blobs, 1)].min() >= min_separation:
            break
    else:
        raise ScenarioError("could not place separated blob centers")
    labels = np.repeat(np.arange(n_blobs), per_blob)
    points = centers[labels] + rng.normal(0.0, spread, (labels.size, dim))
    return points, labels
