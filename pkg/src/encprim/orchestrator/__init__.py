"""
encprim Orchestrator Module

Pipeline configuration, stages and run reports.
"""

from .config import PipelineConfig, SweepConfig, build_pipeline_config, load_pipeline_config
from .pipeline import Pipeline, PipelineResult, PipelineStatus, PipelineStep
from .report import (
    EncounterPrimitiveSummary,
    HistogramBin,
    ReportDistributions,
    RunReport,
    load_report,
    render_markdown,
    report_distributions,
    write_report,
)
from .runner import build_report, create_default_pipeline, run_pipeline
from .stages import (
    RunContext,
    cluster_vectors,
    encounter_config,
    featurize_primitives,
    ingest_encounter,
    segment_encounters,
    sweep_vectors,
)

__all__ = [
    "PipelineConfig",
    "SweepConfig",
    "build_pipeline_config",
    "load_pipeline_config",
    "Pipeline",
    "PipelineStep",
    "PipelineResult",
    "PipelineStatus",
    "RunReport",
    "HistogramBin",
    "EncounterPrimitiveSummary",
    "ReportDistributions",
    "report_distributions",
    "render_markdown",
    "write_report",
    "load_report",
    "RunContext",
    "ingest_encounter",
    "encounter_config",
    "segment_encounters",
    "featurize_primitives",
    "cluster_vectors",
    "sweep_vectors",
    "build_report",
    "create_default_pipeline",
    "run_pipeline",
]
