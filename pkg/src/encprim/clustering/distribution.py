"""
Cluster sizes and representative members.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .kmeans import ClusterModel, Vectors, as_matrix


class ClusterShare(NamedTuple):
    cluster: int
    count: int
    fraction: float


def cluster_distribution(model: ClusterModel) -> list[ClusterShare]:
    sizes = model.sizes()
    total = int(sizes.sum())
    return [ClusterShare(c, int(n), n / total) for c, n in enumerate(sizes)]


def cluster_members(model: ClusterModel) -> list[np.ndarray]:
    """Input indices of each cluster, ascending."""
    return [np.flatnonzero(model.assignments == c) for c in range(model.k)]


def representative_members(model: ClusterModel, vectors: Vectors) -> dict[int, int]:
    """Per cluster, the index of the member closest to its centroid (lowest index on ties)."""
    X = as_matrix(vectors)
    representatives = {}
    for cluster, members in enumerate(cluster_members(model)):
        if members.size == 0:
            continue
        centroid = model.centroids[cluster][None, :]
        distances = cdist(X[members], centroid, metric="sqeuclidean").ravel()
        representatives[cluster] = int(members[np.argmin(distances)])
    return representatives
