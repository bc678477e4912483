"""
Cluster-quality metrics and the k sweep used to pick k at the elbow.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ClusteringError
from ..utils import child_seeds, derive_seed
from .kmeans import ClusterModel, Vectors, as_matrix, kmeans_fit
from .metrics import between_distance, within_distance


logger = logging.getLogger(__name__)

# Outgoing drops smaller than this share of the objective range count as flat.
ELBOW_DROP_FLOOR = 1e-4


def cluster_quality(model: ClusterModel, vectors: Vectors) -> tuple[float, float]:
    """(lambda_w, lambda_b) of a fitted model on the vectors it was fitted to."""
    X = as_matrix(vectors)
    if X.shape[0] != model.n_points:
        raise ClusteringError(f"model has {model.n_points} assignments, got {X.shape[0]} vectors")
    if model.k < 2:
        raise ClusteringError("lambda_b is undefined for k = 1")
    if X.shape[0] <= model.k:
        raise ClusteringError(f"lambda_w is undefined when N = k ({model.k})")
    return (
        within_distance(X, model.assignments, model.centroids),
        between_distance(X, model.assignments, model.centroids),
    )


@dataclass(frozen=True)
class SweepRow:
    """Medians over seeds for one k; deltas are relative to the previous row (NaN on the first)."""

    k: int
    lambda_w: float
    lambda_b: float
    objective: float
    d_lambda_w: float = float("nan")
    d_lambda_b: float = float("nan")


def _fit_metrics(args: tuple[np.ndarray, int, int, int]) -> tuple[float, float, float]:
    X, k, seed, n_init = args
    model = kmeans_fit(X, k, seed, n_init=n_init)
    assert model.lambda_w is not None and model.lambda_b is not None
    return model.lambda_w, model.lambda_b, model.objective


def sweep_seeds(seed: int, k: int, seeds_per_k: int) -> list[int]:
    return child_seeds(derive_seed(seed, f"k={k}"), seeds_per_k)


def elbow_sweep(
    vectors: Vectors,
    k_min: int,
    k_max: int,
    seeds_per_k: int = 5,
    *,
    seed: int = 0,
    n_init: int = 1,
    jobs: int = 1,
) -> list[SweepRow]:
    """Fit k-means for every k in [k_min, k_max] over `seeds_per_k` seeds and report medians."""
    X = as_matrix(vectors)
    n = X.shape[0]
    if not 2 <= k_min < k_max < n:
        raise ClusteringError(
            f"sweep needs 2 <= k_min < k_max < N, got {k_min}..{k_max} with N={n}"
        )
    if seeds_per_k < 1:
        raise ClusteringError("seeds_per_k must be at least 1")

    tasks = [
        (X, k, s, n_init)
        for k in range(k_min, k_max + 1)
        for s in sweep_seeds(seed, k, seeds_per_k)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_fit_metrics, tasks))
    else:
        results = [_fit_metrics(task) for task in tasks]

    rows: list[SweepRow] = []
    for i, k in enumerate(range(k_min, k_max + 1)):
        chunk = np.array(results[i * seeds_per_k : (i + 1) * seeds_per_k])
        lambda_w, lambda_b, objective = np.median(chunk, axis=0)
        previous = rows[-1] if rows else None
        rows.append(
            SweepRow(
                k=k,
                lambda_w=float(lambda_w),
                lambda_b=float(lambda_b),
                objective=float(objective),
                d_lambda_w=float(lambda_w - previous.lambda_w) if previous else float("nan"),
                d_lambda_b=float(lambda_b - previous.lambda_b) if previous else float("nan"),
            )
        )
        logger.debug("sweep k=%d objective=%.6g", k, objective)
    return rows


def detect_elbow(rows: list[SweepRow]) -> int | None:
    """
    k where the median objective stops falling steeply.

    Each interior k is scored by the drop into it over the drop out of it,
    (J(k-1) - J(k)) / (J(k) - J(k+1)), with the outgoing drop floored at
    ELBOW_DROP_FLOOR of the curve's range. Lowest k wins ties. None when
    the curve has fewer than three points, is flat, or never falls.
    """
    if len(rows) < 3:
        return None
    ks = np.array([r.k for r in rows], dtype=np.int64)
    objective = np.array([r.objective for r in rows], dtype=np.float64)
    span = objective.max() - objective.min()
    if not span > 0:
        return None
    drops = objective[:-1] - objective[1:]
    incoming = drops[:-1]
    outgoing = np.maximum(drops[1:], ELBOW_DROP_FLOOR * span)
    ratio = np.where(incoming > 0, incoming / outgoing, 0.0)
    best = int(np.argmax(ratio))
    if ratio[best] <= 0:
        return None
    return int(ks[best + 1])
