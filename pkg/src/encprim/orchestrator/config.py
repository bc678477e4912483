"""
Pipeline configuration.

A pipeline run is described by one PipelineConfig, read from a JSON or YAML
file and optionally overridden from the command line.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..encounters import DEFAULT_MAX_MUTUAL_DISTANCE_M, DEFAULT_MIN_DURATION_S
from ..errors import ConfigError
from ..features import DEFAULT_LENGTH
from ..segmentation import DEFAULT_MIN_DURATION_S as DEFAULT_MIN_PRIMITIVE_S
from ..segmentation import HdpHmmConfig
from ..utils import format_validation_error, read_config_file


class SweepConfig(BaseModel):
    """k range for the elbow sweep."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    enabled: bool = True
    k_min: int = Field(default=2, ge=2)
    k_max: int = Field(default=50, ge=3)
    seeds_per_k: int = Field(default=5, ge=1)

    @model_validator(mode="after")
    def _check_range(self) -> SweepConfig:
        if self.k_min >= self.k_max:
            raise ValueError(f"k_min ({self.k_min}) must be below k_max ({self.k_max})")
        return self


class PipelineConfig(BaseModel):
    """Everything a pipeline run depends on."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    input_dir: Path | None = None
    output_dir: Path = Path("output")
    min_encounter_s: float = Field(default=DEFAULT_MIN_DURATION_S, gt=0)
    max_mutual_m: float = Field(default=DEFAULT_MAX_MUTUAL_DISTANCE_M, gt=0)
    min_primitive_s: float = Field(default=DEFAULT_MIN_PRIMITIVE_S, gt=0)
    rescale_l: int = Field(default=DEFAULT_LENGTH, ge=2)
    hdphmm: HdpHmmConfig = Field(default_factory=HdpHmmConfig)
    cluster_k: int = Field(default=20, ge=1)
    kmeans_n_init: int = Field(default=1, ge=1)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    global_seed: int = Field(default=0, ge=0)
    resample: bool = False
    jobs: int = Field(default=1, ge=1)
    export_representatives: bool = True

    def with_overrides(self, **overrides: Any) -> PipelineConfig:
        """Copy with the non-None overrides applied and re-validated."""
        values = {k: v for k, v in overrides.items() if v is not None}
        if not values:
            return self
        return build_pipeline_config({**self.model_dump(), **values})


def build_pipeline_config(data: dict[str, Any]) -> PipelineConfig:
    try:
        return PipelineConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid pipeline configuration: {format_validation_error(e)}") from e


def load_pipeline_config(path: Path | str | None = None, **overrides: Any) -> PipelineConfig:
    """
    Load a PipelineConfig from a JSON/YAML file (defaults when path is None).

    Relative input/output directories are kept relative to the working
    directory, not the config file.
    """
    data = read_config_file(path) if path is not None else {}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return build_pipeline_config(data)
