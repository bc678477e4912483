"""
encprim Segmentation Module

Weak-limit sticky HDP-HMM segmentation of encounters into driving primitives.
"""

from .config import GammaPrior, HdpHmmConfig, KappaMode, NiwPrior
from .emissions import GaussianEmission, NiwParameters, Standardization
from .model import (
    StateSequence,
    StickyHdpHmmModel,
    log_joint_from_observations,
    log_joint_probability,
)
from .primitives import (
    DEFAULT_MIN_DURATION_S,
    PrimitiveRecord,
    extract_primitives,
    label_runs,
    read_primitives_jsonl,
    write_primitives_jsonl,
)
from .sampler import (
    GibbsSampler,
    SamplerTrace,
    SegmentationFit,
    SweepStats,
    count_change_points,
    fit_segmentation,
    fit_segmentation_trace,
    mean_change_points,
)

__all__ = [
    "GammaPrior",
    "NiwPrior",
    "KappaMode",
    "HdpHmmConfig",
    "GaussianEmission",
    "NiwParameters",
    "Standardization",
    "StickyHdpHmmModel",
    "StateSequence",
    "log_joint_probability",
    "log_joint_from_observations",
    "GibbsSampler",
    "SweepStats",
    "SamplerTrace",
    "SegmentationFit",
    "fit_segmentation",
    "fit_segmentation_trace",
    "count_change_points",
    "mean_change_points",
    "DEFAULT_MIN_DURATION_S",
    "PrimitiveRecord",
    "label_runs",
    "extract_primitives",
    "write_primitives_jsonl",
    "read_primitives_jsonl",
]
