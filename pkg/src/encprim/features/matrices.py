"""
Cross-vehicle local-distance matrices.

M_p[i, j] compares vehicle 1 at step i with vehicle 2 at step j (Euclidean
over positions); M_v does the same for speeds (absolute difference). No
warping path is computed: the grids themselves are the features.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import FeatureError
from .rescale import RescaledPrimitive


@dataclass(frozen=True, eq=False)
class FeatureMatrices:
    M_p: np.ndarray
    M_v: np.ndarray
    normalized: bool = False

    def __post_init__(self) -> None:
        m_p = np.array(self.M_p, dtype=np.float64)
        m_v = np.array(self.M_v, dtype=np.float64)
        if m_p.ndim != 2 or m_p.shape[0] != m_p.shape[1] or m_p.shape != m_v.shape:
            raise FeatureError("feature matrices must be square and of equal size")
        if not (np.all(np.isfinite(m_p)) and np.all(np.isfinite(m_v))):
            raise FeatureError("feature matrices contain non-finite values")
        if np.any(m_p < 0) or np.any(m_v < 0):
            raise FeatureError("feature matrices must be nonnegative")
        m_p.setflags(write=False)
        m_v.setflags(write=False)
        object.__setattr__(self, "M_p", m_p)
        object.__setattr__(self, "M_v", m_v)

    @property
    def length(self) -> int:
        return self.M_p.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMatrices):
            return NotImplemented
        return (
            self.normalized == other.normalized
            and np.array_equal(self.M_p, other.M_p)
            and np.array_equal(self.M_v, other.M_v)
        )


def cross_distance_matrices(rp: RescaledPrimitive) -> FeatureMatrices:
    """Unnormalized position (meters) and speed (m/s) cross-distance grids."""
    return FeatureMatrices(
        M_p=cdist(rp.p1, rp.p2, metric="euclidean"),
        M_v=cdist(rp.v1[:, None], rp.v2[:, None], metric="cityblock"),
        normalized=False,
    )


def _scale_by_max(matrix: np.ndarray) -> np.ndarray:
    peak = matrix.max()
    return matrix / peak if peak > 0 else matrix


def normalize_matrices(fm: FeatureMatrices) -> FeatureMatrices:
    """Divide each matrix by its own maximum; an all-zero matrix is left as is."""
    return FeatureMatrices(M_p=_scale_by_max(fm.M_p), M_v=_scale_by_max(fm.M_v), normalized=True)


def export_matrix_grid(matrix: np.ndarray, path: Path | str) -> Path:
    """Write an l x l grid as whitespace-separated text for heatmap plotting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.asarray(matrix), fmt="%.10g")
    return path
