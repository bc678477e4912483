"""
Run report: corpus statistics, histograms and cluster summary.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel, ConfigDict, Field

from ..clustering import ClusterModel, SweepRow, cluster_distribution
from ..encounters import DrivingPrimitive


REPORT_JSON = "report.json"
REPORT_MD = "report.md"
DURATION_HISTOGRAM = "primitive_durations.csv"
PER_ENCOUNTER_HISTOGRAM = "primitives_per_encounter.csv"
CLUSTER_DISTRIBUTION = "cluster_distribution.csv"

MANY_PRIMITIVES = 10


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    bin: int
    count: int
    fraction: float


class EncounterPrimitiveSummary(BaseModel):
    """How many primitives each qualifying encounter yielded."""

    model_config = ConfigDict(frozen=True)

    mean: float
    median: float
    mode: int
    single_primitive_encounters: int
    share_over_10: float


class ReportDistributions(BaseModel):
    model_config = ConfigDict(frozen=True)

    duration_histogram: list[HistogramBin]
    primitives_per_encounter_histogram: list[HistogramBin]
    cluster_distribution: list[HistogramBin]


class SweepEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    lambda_w: float
    lambda_b: float
    objective: float
    d_lambda_w: float | None = None
    d_lambda_b: float | None = None

    @classmethod
    def from_row(cls, row: SweepRow) -> SweepEntry:
        def finite(value: float) -> float | None:
            return None if math.isnan(value) else value

        return cls(
            k=row.k,
            lambda_w=row.lambda_w,
            lambda_b=row.lambda_b,
            objective=row.objective,
            d_lambda_w=finite(row.d_lambda_w),
            d_lambda_b=finite(row.d_lambda_b),
        )


class RunReport(BaseModel):
    """Summary of one pipeline run; contains no timestamps so reruns compare equal."""

    model_config = ConfigDict(frozen=True)

    corpus_size: int
    qualified_count: int
    skipped: dict[str, str] = Field(default_factory=dict)
    primitive_count: int
    duration_mean_s: float
    duration_median_s: float
    primitives_per_encounter: EncounterPrimitiveSummary
    cluster_k: int
    lambda_w: float | None = None
    lambda_b: float | None = None
    elbow_k: int | None = None
    sweep: list[SweepEntry] = Field(default_factory=list)
    distributions: ReportDistributions


def _bins(values: Sequence[int], lo: int, hi: int) -> list[HistogramBin]:
    counts = Counter(values)
    total = len(values)
    return [
        HistogramBin(bin=b, count=counts.get(b, 0), fraction=counts.get(b, 0) / total)
        for b in range(lo, hi + 1)
    ]


def duration_histogram(durations: Sequence[float]) -> list[HistogramBin]:
    """1-second bins labelled by their lower edge, contiguous from 0 s."""
    if not durations:
        return []
    edges = [int(math.floor(d)) for d in durations]
    return _bins(edges, 0, max(edges))


def per_encounter_histogram(counts: Sequence[int]) -> list[HistogramBin]:
    """Integer bins from the smallest to the largest primitives-per-encounter count."""
    if not counts:
        return []
    return _bins(list(counts), min(counts), max(counts))


def primitives_per_encounter(
    primitives: Sequence[DrivingPrimitive], encounter_ids: Sequence[str] | None = None
) -> list[int]:
    """Primitive count per encounter, in `encounter_ids` order (zero for encounters without any)."""
    counts = Counter(p.encounter_id for p in primitives)
    ids = list(encounter_ids) if encounter_ids is not None else sorted(counts)
    return [counts.get(i, 0) for i in ids]


def summarize_encounters(counts: Sequence[int]) -> EncounterPrimitiveSummary:
    if not counts:
        return EncounterPrimitiveSummary(
            mean=0.0, median=0.0, mode=0, single_primitive_encounters=0, share_over_10=0.0
        )
    tally = Counter(counts)
    top = max(tally.values())
    return EncounterPrimitiveSummary(
        mean=float(np.mean(counts)),
        median=float(np.median(counts)),
        mode=min(c for c, n in tally.items() if n == top),
        single_primitive_encounters=tally.get(1, 0),
        share_over_10=sum(1 for c in counts if c > MANY_PRIMITIVES) / len(counts),
    )


def report_distributions(
    primitives: Sequence[DrivingPrimitive],
    model: ClusterModel,
    encounter_ids: Sequence[str] | None = None,
) -> ReportDistributions:
    """Duration, primitives-per-encounter and cluster-size histograms."""
    return ReportDistributions(
        duration_histogram=duration_histogram([p.duration_s for p in primitives]),
        primitives_per_encounter_histogram=per_encounter_histogram(
            primitives_per_encounter(primitives, encounter_ids)
        ),
        cluster_distribution=[
            HistogramBin(bin=s.cluster, count=s.count, fraction=s.fraction)
            for s in cluster_distribution(model)
        ],
    )


def write_histogram_csv(bins: Sequence[HistogramBin], path: Path) -> Path:
    frame = pd.DataFrame([b.model_dump() for b in bins], columns=["bin", "count", "fraction"])
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def render_markdown(report: RunReport) -> str:
    env = Environment(
        loader=PackageLoader("encprim", "templates"),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    return env.get_template("report.md.j2").render(report=report)


def write_report(report: RunReport, output_dir: Path) -> list[Path]:
    """report.json, report.md and the three histogram CSVs."""
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / REPORT_JSON
    json_path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    md_path = output_dir / REPORT_MD
    md_path.write_text(render_markdown(report), encoding="utf-8")
    dist = report.distributions
    return [
        json_path,
        md_path,
        write_histogram_csv(dist.duration_histogram, output_dir / DURATION_HISTOGRAM),
        write_histogram_csv(
            dist.primitives_per_encounter_histogram, output_dir / PER_ENCOUNTER_HISTOGRAM
        ),
        write_histogram_csv(dist.cluster_distribution, output_dir / CLUSTER_DISTRIBUTION),
    ]


def load_report(path: Path | str) -> RunReport:
    return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
