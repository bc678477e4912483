"""
encprim - Encounter Primitives

Segments two-vehicle driving encounters into driving primitives with a
sticky HDP-HMM and clusters the primitives by their cross-distance features.
"""

__version__ = "0.1.0"

from .encounters import DrivingEncounter, DrivingPrimitive, load_encounter_csv
from .errors import EncprimError, PipelineStageError
from .orchestrator import PipelineConfig, RunReport, run_pipeline
from .segmentation import HdpHmmConfig, fit_segmentation

__all__ = [
    "__version__",
    "DrivingEncounter",
    "DrivingPrimitive",
    "load_encounter_csv",
    "EncprimError",
    "PipelineStageError",
    "HdpHmmConfig",
    "fit_segmentation",
    "PipelineConfig",
    "RunReport",
    "run_pipeline",
]
