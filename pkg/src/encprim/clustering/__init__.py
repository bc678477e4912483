"""
encprim Clustering Module

k-means over primitive feature vectors, quality metrics and the elbow sweep.
"""

from .distribution import (
    ClusterShare,
    cluster_distribution,
    cluster_members,
    representative_members,
)
from .io import (
    ASSIGNMENTS_FILE,
    CENTROIDS_FILE,
    read_assignments,
    read_sweep_csv,
    write_cluster_model,
    write_distribution_csv,
    write_sweep_csv,
)
from .kmeans import ClusterModel, as_matrix, kmeans_fit, sum_of_squares
from .metrics import between_distance, within_distance
from .quality import SweepRow, cluster_quality, detect_elbow, elbow_sweep

__all__ = [
    "ClusterModel",
    "as_matrix",
    "kmeans_fit",
    "sum_of_squares",
    "within_distance",
    "between_distance",
    "cluster_quality",
    "SweepRow",
    "elbow_sweep",
    "detect_elbow",
    "ClusterShare",
    "cluster_distribution",
    "cluster_members",
    "representative_members",
    "CENTROIDS_FILE",
    "ASSIGNMENTS_FILE",
    "write_cluster_model",
    "read_assignments",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_distribution_csv",
]
