"""
Exceptions for encprim

Every failure raised on purpose by the package derives from EncprimError.
Input problems also derive from ValueError so callers can treat them as such.
"""

from __future__ import annotations


class EncprimError(Exception):
    """Base class for all encprim errors."""


class EncounterParseError(EncprimError, ValueError):
    """A CSV row could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"{message} at line {line}")


class EncounterValidationError(EncprimError, ValueError):
    """An encounter violates a data-model invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"{message} at line {line}")


class ConfigError(EncprimError, ValueError):
    """Invalid configuration."""


class SegmentationError(EncprimError, ValueError):
    """Invalid input to the HDP-HMM segmentation."""


class FeatureError(EncprimError, ValueError):
    """Invalid input to primitive featurization."""


class ClusteringError(EncprimError, ValueError):
    """Invalid input to k-means or its quality metrics."""


class ScenarioError(EncprimError, ValueError):
    """Invalid synthetic scenario specification."""


class OracleError(EncprimError, ValueError):
    """Instance too large for exhaustive enumeration."""


class PipelineStageError(EncprimError):
    """A pipeline stage failed; carries the stage name and offending encounter."""

    def __init__(self, stage: str, message: str, encounter_id: str | None = None):
        self.stage = stage
        self.encounter_id = encounter_id
        where = f" (encounter {encounter_id})" if encounter_id else ""
        super().__init__(f"[{stage}]{where} {message}")
