"""
Encounter Data Model for encprim

Two-vehicle encounters sampled at a uniform rate, and the driving primitives
cut out of them. Arrays held by these types are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import EncounterValidationError


# Column layout of DrivingEncounter.data, shared with the CSV schemas:
# t, a1, b1, v1, a2, b2, v2 where (a, b) is (lat, lon) or (x east, y north).
T_COL, A1_COL, B1_COL, V1_COL, A2_COL, B2_COL, V2_COL = range(7)
N_COLUMNS = 7

# Tolerance on the sampling interval, seconds.
SPACING_TOLERANCE_S = 1e-6


class CoordinateFrame(str, Enum):
    """Coordinate convention of encounter positions."""

    GEOGRAPHIC_DEGREES = "geographic_degrees"
    LOCAL_METERS = "local_meters"


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TrajectorySample:
    """One time step of an encounter: both positions and both speeds."""

    t: float
    p1: tuple[float, float]
    p2: tuple[float, float]
    v1: float
    v2: float

    def __post_init__(self) -> None:
        values = (self.t, *self.p1, *self.p2, self.v1, self.v2)
        if not all(np.isfinite(values)):
            raise EncounterValidationError("non-finite sample component")
        if self.v1 < 0 or self.v2 < 0:
            raise EncounterValidationError("negative speed")


@dataclass(frozen=True)
class DrivingEncounter:
    """
    A uniformly sampled two-vehicle time series.

    `data` is a T x 7 array in column order t, p1, v1, p2, v2.
    """

    id: str
    data: np.ndarray
    rate_hz: float
    frame: CoordinateFrame = CoordinateFrame.LOCAL_METERS
    origin: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        data = _readonly(self.data)
        object.__setattr__(self, "data", data)

        if data.ndim != 2 or data.shape[1] != N_COLUMNS:
            raise EncounterValidationError(
                f"encounter {self.id}: expected T x {N_COLUMNS} data, got shape {data.shape}"
            )
        if data.shape[0] < 2:
            raise EncounterValidationError(f"encounter {self.id}: need at least 2 samples")
        if not np.isfinite(self.rate_hz) or self.rate_hz <= 0:
            raise EncounterValidationError(f"encounter {self.id}: invalid rate {self.rate_hz}")
        if not np.all(np.isfinite(data)):
            raise EncounterValidationError(f"encounter {self.id}: non-finite values")
        if np.any(data[:, [V1_COL, V2_COL]] < 0):
            raise EncounterValidationError(f"encounter {self.id}: negative speed")

        dt = np.diff(data[:, T_COL])
        if np.any(dt <= 0):
            raise EncounterValidationError(f"encounter {self.id}: non-monotonic time")
        if np.any(np.abs(dt - 1.0 / self.rate_hz) > SPACING_TOLERANCE_S):
            raise EncounterValidationError(
                f"encounter {self.id}: sample spacing deviates from 1/{self.rate_hz} s"
            )

    @classmethod
    def from_samples(
        cls,
        id: str,
        samples: list[TrajectorySample],
        rate_hz: float,
        frame: CoordinateFrame = CoordinateFrame.LOCAL_METERS,
    ) -> DrivingEncounter:
        """Build an encounter from TrajectorySample objects."""
        rows = [[s.t, s.p1[0], s.p1[1], s.v1, s.p2[0], s.p2[1], s.v2] for s in samples]
        return cls(id=id, data=np.array(rows, dtype=np.float64).reshape(-1, N_COLUMNS),
                   rate_hz=rate_hz, frame=frame)

    @property
    def n_samples(self) -> int:
        return int(self.data.shape[0])

    @property
    def duration_s(self) -> float:
        return (self.n_samples - 1) / self.rate_hz

    @property
    def t(self) -> np.ndarray:
        return self.data[:, T_COL]

    @property
    def p1(self) -> np.ndarray:
        return self.data[:, [A1_COL, B1_COL]]

    @property
    def p2(self) -> np.ndarray:
        return self.data[:, [A2_COL, B2_COL]]

    @property
    def v1(self) -> np.ndarray:
        return self.data[:, V1_COL]

    @property
    def v2(self) -> np.ndarray:
        return self.data[:, V2_COL]

    @property
    def samples(self) -> list[TrajectorySample]:
        return [
            TrajectorySample(
                t=float(row[T_COL]),
                p1=(float(row[A1_COL]), float(row[B1_COL])),
                p2=(float(row[A2_COL]), float(row[B2_COL])),
                v1=float(row[V1_COL]),
                v2=float(row[V2_COL]),
            )
            for row in self.data
        ]

    def observations(self) -> np.ndarray:
        """T x 6 observation vectors [x1, y1, x2, y2, v1, v2]."""
        return self.data[:, [A1_COL, B1_COL, A2_COL, B2_COL, V1_COL, V2_COL]].copy()

    def mutual_distance(self) -> np.ndarray:
        """Euclidean distance between the vehicles at every sample."""
        return np.linalg.norm(self.p1 - self.p2, axis=1)

    def with_data(self, data: np.ndarray, **changes: object) -> DrivingEncounter:
        """Copy of this encounter with new data (and optionally other fields)."""
        fields = {
            "id": self.id,
            "data": data,
            "rate_hz": self.rate_hz,
            "frame": self.frame,
            "origin": self.origin,
        }
        fields.update(changes)
        return DrivingEncounter(**fields)  # type: ignore[arg-type]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DrivingEncounter):
            return NotImplemented
        return (
            self.id == other.id
            and self.rate_hz == other.rate_hz
            and self.frame == other.frame
            and self.origin == other.origin
            and np.array_equal(self.data, other.data)
        )


@dataclass(frozen=True, eq=False)
class DrivingPrimitive:
    """A contiguous single-label run [m, n] (inclusive, 0-based) of an encounter."""

    encounter_id: str
    m: int
    n: int
    state_label: int
    data: np.ndarray = field(repr=False)
    rate_hz: float

    def __post_init__(self) -> None:
        data = _readonly(self.data)
        object.__setattr__(self, "data", data)
        if self.m < 0 or self.n < self.m:
            raise EncounterValidationError(f"invalid primitive bounds [{self.m}, {self.n}]")
        if self.state_label < 0:
            raise EncounterValidationError(f"negative state label {self.state_label}")
        if data.shape != (self.n - self.m + 1, N_COLUMNS):
            raise EncounterValidationError(
                f"primitive [{self.m}, {self.n}] expects {self.n - self.m + 1} samples, "
                f"got {data.shape[0]}"
            )

    @classmethod
    def from_encounter(cls, enc: DrivingEncounter, m: int, n: int, label: int) -> DrivingPrimitive:
        if n > enc.n_samples - 1:
            raise EncounterValidationError(
                f"primitive end {n} beyond encounter {enc.id} (T={enc.n_samples})"
            )
        return cls(
            encounter_id=enc.id,
            m=m,
            n=n,
            state_label=label,
            data=enc.data[m : n + 1],
            rate_hz=enc.rate_hz,
        )

    @property
    def n_samples(self) -> int:
        return self.n - self.m + 1

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.rate_hz

    @property
    def t(self) -> np.ndarray:
        return self.data[:, T_COL]

    @property
    def p1(self) -> np.ndarray:
        return self.data[:, [A1_COL, B1_COL]]

    @property
    def p2(self) -> np.ndarray:
        return self.data[:, [A2_COL, B2_COL]]

    @property
    def v1(self) -> np.ndarray:
        return self.data[:, V1_COL]

    @property
    def v2(self) -> np.ndarray:
        return self.data[:, V2_COL]

    @property
    def identity(self) -> tuple[str, int, int, int]:
        return (self.encounter_id, self.m, self.n, self.state_label)
