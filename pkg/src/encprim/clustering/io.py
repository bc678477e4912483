"""
CSV artifacts of clustering: centroids, assignments and the k sweep.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import asdict
from pathlib import Path

import pandas as pd

from ..errors import ClusteringError
from ..features.rescale import PrimitiveIdentity
from .distribution import ClusterShare
from .kmeans import ClusterModel
from .quality import SweepRow


CENTROIDS_FILE = "centroids.csv"
ASSIGNMENTS_FILE = "assignments.csv"
SWEEP_COLUMNS = ["k", "lambda_w", "lambda_b", "objective", "d_lambda_w", "d_lambda_b"]


def _write(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def write_cluster_model(
    model: ClusterModel,
    identities: Sequence[PrimitiveIdentity],
    directory: Path | str,
) -> tuple[Path, Path]:
    """centroids.csv (k rows) and assignments.csv (encounter_id, m, n, label, cluster)."""
    if len(identities) != model.n_points:
        raise ClusteringError(
            f"{len(identities)} identities for {model.n_points} clustered vectors"
        )
    directory = Path(directory)
    centroids = pd.DataFrame(
        model.centroids, columns=[f"f{i}" for i in range(model.centroids.shape[1])]
    )
    assignments = pd.DataFrame(list(identities), columns=["encounter_id", "m", "n", "label"])
    assignments["cluster"] = model.assignments
    return (
        _write(centroids, directory / CENTROIDS_FILE),
        _write(assignments, directory / ASSIGNMENTS_FILE),
    )


def read_assignments(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path, dtype={"encounter_id": str}, keep_default_na=False)


def write_sweep_csv(rows: Sequence[SweepRow], path: Path | str) -> Path:
    frame = pd.DataFrame([asdict(r) for r in rows], columns=SWEEP_COLUMNS)
    return _write(frame, Path(path))


def read_sweep_csv(path: Path | str) -> list[SweepRow]:
    frame = pd.read_csv(path, float_precision="round_trip")
    return [
        SweepRow(
            k=int(row.k),
            lambda_w=float(row.lambda_w),
            lambda_b=float(row.lambda_b),
            objective=float(row.objective),
            d_lambda_w=float(row.d_lambda_w),
            d_lambda_b=float(row.d_lambda_b),
        )
        for row in frame.itertuples(index=False)
    ]


def write_distribution_csv(shares: Sequence[ClusterShare], path: Path | str) -> Path:
    frame = pd.DataFrame(
        [(s.cluster, s.count, s.fraction) for s in shares], columns=["bin", "count", "fraction"]
    )
    return _write(frame, Path(path))
