"""
encprim Features Module

Rescaling, cross-distance matrices and flattened feature vectors of primitives.
"""

from .matrices import (
    FeatureMatrices,
    cross_distance_matrices,
    export_matrix_grid,
    normalize_matrices,
)
from .rescale import DEFAULT_LENGTH, RescaledPrimitive, rescale_primitive
from .vectors import (
    FeatureVector,
    featurize_primitive,
    flatten_features,
    read_features_csv,
    unflatten_features,
    write_features_csv,
)

__all__ = [
    "DEFAULT_LENGTH",
    "RescaledPrimitive",
    "rescale_primitive",
    "FeatureMatrices",
    "cross_distance_matrices",
    "normalize_matrices",
    "export_matrix_grid",
    "FeatureVector",
    "flatten_features",
    "unflatten_features",
    "featurize_primitive",
    "write_features_csv",
    "read_features_csv",
]
