"""
Encounter qualification rules: minimum duration and maximum closest approach.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EncounterValidationError
from .models import CoordinateFrame, DrivingEncounter


DEFAULT_MIN_DURATION_S = 10.0
DEFAULT_MAX_MUTUAL_DISTANCE_M = 100.0

# Float slack on the duration comparison, seconds.
_DURATION_EPS = 1e-9


@dataclass(frozen=True)
class Qualification:
    """Outcome of qualify_encounter; `reason` names the first failed rule."""

    qualified: bool
    reason: str | None
    duration_s: float
    min_distance_m: float

    def __bool__(self) -> bool:
        return self.qualified


def qualify_encounter(
    enc: DrivingEncounter,
    min_duration_s: float = DEFAULT_MIN_DURATION_S,
    max_mutual_distance_m: float = DEFAULT_MAX_MUTUAL_DISTANCE_M,
) -> Qualification:
    """Check the duration and closest-approach rules for an encounter."""
    if enc.frame != CoordinateFrame.LOCAL_METERS:
        raise EncounterValidationError(f"encounter {enc.id}: qualify requires projected positions")

    duration = enc.duration_s
    min_distance = float(np.min(enc.mutual_distance()))

    if duration + _DURATION_EPS < min_duration_s:
        return Qualification(False, "duration", duration, min_distance)
    if min_distance > max_mutual_distance_m:
        return Qualification(False, "distance", duration, min_distance)
    return Qualification(True, None, duration, min_distance)
