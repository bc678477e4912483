"""
Within- and between-cluster distance statistics.
"""

from __future__ import annotations

import numpy as np

from ..errors import ClusteringError


def within_distance(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    """lambda_w = sum_i sum_{x in C_i} ||x - mu_i||^2 / (N - k)."""
    n, k = X.shape[0], centroids.shape[0]
    if n <= k:
        raise ClusteringError(f"lambda_w is undefined when N = k ({n})")
    return float(((X - centroids[labels]) ** 2).sum() / (n - k))


def between_distance(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    """lambda_b = sum_i n_i ||mu_i - mean(X)||^2 / (k - 1)."""
    k = centroids.shape[0]
    if k < 2:
        raise ClusteringError("lambda_b is undefined for k = 1")
    sizes = np.bincount(labels, minlength=k)
    spread = ((centroids - X.mean(axis=0)) ** 2).sum(axis=1)
    return float((sizes * spread).sum() / (k - 1))
