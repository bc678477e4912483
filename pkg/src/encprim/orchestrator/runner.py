"""
End-to-end pipeline: ingest -> segment -> featurize -> cluster -> sweep -> report.
"""

from __future__ import annotations

import numpy as np

from ..errors import PipelineStageError
from ..utils import get_logger
from .config import PipelineConfig
from .pipeline import Pipeline
from .report import (
    RunReport,
    SweepEntry,
    primitives_per_encounter,
    report_distributions,
    summarize_encounters,
    write_report,
)
from .stages import (
    RunContext,
    cluster_stage,
    featurize_stage,
    ingest_stage,
    segment_stage,
    sweep_stage,
)


logger = get_logger(__name__)


def build_report(ctx: RunContext) -> RunReport:
    if ctx.model is None:
        raise PipelineStageError("report", "no cluster model to report on")
    encounter_ids = [enc.id for enc in ctx.encounters]
    durations = [p.duration_s for p in ctx.primitives]
    return RunReport(
        corpus_size=ctx.corpus_size,
        qualified_count=len(ctx.encounters),
        skipped=dict(sorted(ctx.skipped.items())),
        primitive_count=len(ctx.primitives),
        duration_mean_s=float(np.mean(durations)),
        duration_median_s=float(np.median(durations)),
        primitives_per_encounter=summarize_encounters(
            primitives_per_encounter(ctx.primitives, encounter_ids)
        ),
        cluster_k=ctx.model.k,
        lambda_w=ctx.model.lambda_w,
        lambda_b=ctx.model.lambda_b,
        elbow_k=ctx.elbow_k,
        sweep=[SweepEntry.from_row(row) for row in ctx.sweep_rows],
        distributions=report_distributions(ctx.primitives, ctx.model, encounter_ids),
    )


class _ReportStep:
    """Builds the RunReport, writes it and keeps it for the caller."""

    def __init__(self) -> None:
        self.report: RunReport | None = None

    def __call__(self, ctx: RunContext) -> None:
        self.report = build_report(ctx)
        write_report(self.report, ctx.output_dir)


def create_default_pipeline(report_step: _ReportStep | None = None) -> Pipeline[RunContext]:
    """The standard six-stage pipeline."""
    return (
        Pipeline[RunContext]("encprim", "Encounter segmentation and primitive clustering")
        .add_step("ingest", ingest_stage)
        .add_step("segment", segment_stage)
        .add_step("featurize", featurize_stage)
        .add_step("cluster", cluster_stage)
        .add_step("sweep", sweep_stage, condition=lambda ctx: ctx.config.sweep.enabled)
        .add_step("report", report_step or _ReportStep())
    )


def run_pipeline(cfg: PipelineConfig) -> RunReport:
    """Run every stage; raises PipelineStageError naming the failed stage."""
    report_step = _ReportStep()
    pipeline = create_default_pipeline(report_step)
    ctx = RunContext(config=cfg)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)

    logger.info("Running pipeline on %s -> %s", cfg.input_dir, cfg.output_dir)
    result = pipeline.execute(ctx)
    if not result.succeeded:
        assert result.error is not None
        raise result.error
    assert report_step.report is not None
    return report_step.report
