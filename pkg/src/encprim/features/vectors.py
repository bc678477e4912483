"""
Flattened primitive feature vectors and their CSV form.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..encounters import DrivingPrimitive
from ..errors import FeatureError
from .matrices import FeatureMatrices, cross_distance_matrices, normalize_matrices
from .rescale import DEFAULT_LENGTH, PrimitiveIdentity, rescale_primitive


IDENTITY_COLUMNS = ["encounter_id", "m", "n", "label"]


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """phi = row-major M_p followed by row-major M_v."""

    phi: np.ndarray
    source: PrimitiveIdentity | None = None

    def __post_init__(self) -> None:
        phi = np.array(self.phi, dtype=np.float64)
        if phi.ndim != 1:
            raise FeatureError("feature vector must be one-dimensional")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return self.phi.shape[0]

    @property
    def length(self) -> int:
        """Rescale length l such that len(phi) = 2 l^2."""
        l = math.isqrt(len(self) // 2)
        if 2 * l * l != len(self):
            raise FeatureError(f"feature length {len(self)} is not 2*l^2")
        return l

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.source == other.source and np.array_equal(self.phi, other.phi)


def flatten_features(fm: FeatureMatrices, source: PrimitiveIdentity | None = None) -> FeatureVector:
    if not fm.normalized:
        raise FeatureError("flatten_features requires normalized matrices")
    return FeatureVector(phi=np.concatenate([fm.M_p.ravel(), fm.M_v.ravel()]), source=source)


def unflatten_features(vec: FeatureVector | np.ndarray, l: int | None = None) -> FeatureMatrices:
    """Inverse of `flatten_features`."""
    vec = vec if isinstance(vec, FeatureVector) else FeatureVector(phi=vec)
    l = vec.length if l is None else l
    if len(vec) != 2 * l * l:
        raise FeatureError(f"feature length {len(vec)} does not match l={l}")
    half = l * l
    return FeatureMatrices(
        M_p=vec.phi[:half].reshape(l, l),
        M_v=vec.phi[half:].reshape(l, l),
        normalized=True,
    )


def featurize_primitive(prim: DrivingPrimitive, l: int = DEFAULT_LENGTH) -> FeatureVector:
    """rescale -> cross distances -> normalize -> flatten."""
    matrices = normalize_matrices(cross_distance_matrices(rescale_primitive(prim, l)))
    return flatten_features(matrices, source=prim.identity)


def features_frame(vectors: Sequence[FeatureVector]) -> pd.DataFrame:
    if not vectors:
        return pd.DataFrame(columns=IDENTITY_COLUMNS)
    width = len(vectors[0])
    if any(len(v) != width for v in vectors):
        raise FeatureError("feature vectors have mixed lengths")
    if any(v.source is None for v in vectors):
        raise FeatureError("feature vectors need a source primitive to be written")
    identity = pd.DataFrame([v.source for v in vectors], columns=IDENTITY_COLUMNS)
    values = pd.DataFrame(
        np.vstack([v.phi for v in vectors]), columns=[f"f{i}" for i in range(width)]
    )
    return pd.concat([identity, values], axis=1)


def write_features_csv(vectors: Sequence[FeatureVector], path: Path | str) -> Path:
    """One row per primitive: identity columns, then f0..f{2l^2-1}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    features_frame(vectors).to_csv(path, index=False, lineterminator="\n")
    return path


def read_features_csv(path: Path | str) -> list[FeatureVector]:
    frame = pd.read_csv(
        path, dtype={"encounter_id": str}, keep_default_na=False, float_precision="round_trip"
    )
    missing = [c for c in IDENTITY_COLUMNS if c not in frame.columns]
    if missing:
        raise FeatureError(f"{path}: missing columns {missing}")
    values = frame.drop(columns=IDENTITY_COLUMNS).to_numpy(dtype=np.float64)
    return [
        FeatureVector(
            phi=values[i],
            source=(str(row.encounter_id), int(row.m), int(row.n), int(row.label)),
        )
        for i, row in enumerate(frame[IDENTITY_COLUMNS].itertuples(index=False))
    ]
