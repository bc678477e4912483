"""
Driving-primitive extraction from a state sequence, and JSON-lines records.
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..encounters import DrivingEncounter, DrivingPrimitive
from ..errors import SegmentationError
from .model import StateSequence


DEFAULT_MIN_DURATION_S = 0.2
_DURATION_EPS = 1e-9


def label_runs(labels: np.ndarray) -> list[tuple[int, int, int]]:
    """Maximal constant-label runs as (m, n, label), n inclusive."""
    labels = np.asarray(labels)
    if labels.size == 0:
        return []
    starts = np.concatenate([[0], np.flatnonzero(labels[1:] != labels[:-1]) + 1])
    ends = np.concatenate([starts[1:] - 1, [labels.size - 1]])
    return [(int(m), int(n), int(labels[m])) for m, n in zip(starts, ends)]


def extract_primitives(
    seq: StateSequence,
    enc: DrivingEncounter,
    min_duration_s: float = DEFAULT_MIN_DURATION_S,
    *,
    min_samples: int = 1,
) -> list[DrivingPrimitive]:
    """
    Split an encounter at label changes.

    Runs shorter than `min_duration_s` (or with fewer than `min_samples`
    samples) are dropped; the rest are returned in time order.
    """
    if len(seq) != enc.n_samples:
        raise SegmentationError(
            f"state sequence has {len(seq)} labels, encounter {enc.id} has {enc.n_samples} samples"
        )
    primitives = []
    for m, n, label in label_runs(seq.labels):
        n_samples = n - m + 1
        if n_samples < min_samples or n_samples / enc.rate_hz + _DURATION_EPS < min_duration_s:
            continue
        primitives.append(DrivingPrimitive.from_encounter(enc, m, n, label))
    return primitives


class PrimitiveRecord(BaseModel):
    """One line of primitives.jsonl."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    encounter_id: str
    m: int = Field(ge=0)
    n: int = Field(ge=0)
    label: int = Field(ge=0)
    duration_s: float = Field(gt=0)

    @classmethod
    def from_primitive(cls, prim: DrivingPrimitive) -> PrimitiveRecord:
        return cls(
            encounter_id=prim.encounter_id,
            m=prim.m,
            n=prim.n,
            label=prim.state_label,
            duration_s=prim.duration_s,
        )

    def to_primitive(self, enc: DrivingEncounter) -> DrivingPrimitive:
        if enc.id != self.encounter_id:
            raise SegmentationError(f"record for {self.encounter_id} applied to {enc.id}")
        return DrivingPrimitive.from_encounter(enc, self.m, self.n, self.label)


def write_primitives_jsonl(
    records: Iterable[PrimitiveRecord | DrivingPrimitive], path: Path | str
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            if isinstance(record, DrivingPrimitive):
                record = PrimitiveRecord.from_primitive(record)
            f.write(record.model_dump_json() + "\n")
    return path


def read_primitives_jsonl(path: Path | str) -> list[PrimitiveRecord]:
    with open(path, encoding="utf-8") as f:
        return [PrimitiveRecord.model_validate_json(line) for line in f if line.strip()]
