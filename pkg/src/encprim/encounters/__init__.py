"""
encprim Encounters Module

Two-vehicle encounter data model, CSV ingestion, projection and qualification.
"""

from .io import (
    GEOGRAPHIC_COLUMNS,
    LOCAL_COLUMNS,
    list_encounter_files,
    load_encounter_csv,
    save_encounter_csv,
)
from .models import CoordinateFrame, DrivingEncounter, DrivingPrimitive, TrajectorySample
from .projection import (
    EARTH_RADIUS_M,
    geographic_to_local,
    local_to_geographic,
    project_to_local_frame,
    unproject_to_geographic,
)
from .qualify import (
    DEFAULT_MAX_MUTUAL_DISTANCE_M,
    DEFAULT_MIN_DURATION_S,
    Qualification,
    qualify_encounter,
)

__all__ = [
    "CoordinateFrame",
    "TrajectorySample",
    "DrivingEncounter",
    "DrivingPrimitive",
    "GEOGRAPHIC_COLUMNS",
    "LOCAL_COLUMNS",
    "load_encounter_csv",
    "save_encounter_csv",
    "list_encounter_files",
    "EARTH_RADIUS_M",
    "geographic_to_local",
    "local_to_geographic",
    "project_to_local_frame",
    "unproject_to_geographic",
    "DEFAULT_MIN_DURATION_S",
    "DEFAULT_MAX_MUTUAL_DISTANCE_M",
    "Qualification",
    "qualify_encounter",
]
