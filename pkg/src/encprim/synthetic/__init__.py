"""
encprim Synthetic Module

Labeled synthetic encounters in six scenario families, and brute-force oracles.
"""

from .generator import (
    DEFAULT_ORIGIN,
    TRUTH_SUFFIX,
    LabeledEncounter,
    generate_corpus,
    generate_encounter,
    generate_planted_encounter,
    read_truth_labels,
    write_labeled_encounter,
)
from .oracles import OraclePartition, make_blobs, oracle_kmeans, segmentation_accuracy
from .scenarios import (
    Maneuver,
    ManeuverKind,
    Phase,
    ScenarioFamily,
    ScenarioSpec,
    VehicleStart,
)

__all__ = [
    "ScenarioFamily",
    "ManeuverKind",
    "Maneuver",
    "Phase",
    "VehicleStart",
    "ScenarioSpec",
    "LabeledEncounter",
    "DEFAULT_ORIGIN",
    "TRUTH_SUFFIX",
    "generate_encounter",
    "generate_planted_encounter",
    "generate_corpus",
    "write_labeled_encounter",
    "read_truth_labels",
    "segmentation_accuracy",
    "OraclePartition",
    "oracle_kmeans",
    "make_blobs",
]
