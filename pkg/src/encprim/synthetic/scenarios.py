"""
Scenario families and phase plans for synthetic encounters.

A plan is a list of phases; during a phase each vehicle follows one
maneuver with closed-form kinematics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from ..errors import ScenarioError


class ScenarioFamily(str, Enum):
    BOTH_STILL = "BothStill"
    VERTICAL_CROSS = "VerticalCross"
    SAME_DIRECTION = "SameDirection"
    OPPOSITE_DIRECTION = "OppositeDirection"
    ONE_MOVING_ONE_STILL = "OneMovingOneStill"
    FOLLOW_THEN_TURN = "FollowThenTurn"


class ManeuverKind(str, Enum):
    STILL = "still"
    CRUISE = "cruise"
    ACCELERATE = "accelerate"
    DECELERATE = "decelerate"
    TURN = "turn"


@dataclass(frozen=True)
class Maneuver:
    """
    One vehicle's behavior during a phase.

    `value` is the acceleration magnitude (m/s^2) for ACCELERATE/DECELERATE
    and the yaw rate (rad/s, positive = left) for TURN.
    """

    kind: ManeuverKind
    value: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ScenarioError(f"{self.kind.value}: non-finite parameter")
        if self.kind in (ManeuverKind.ACCELERATE, ManeuverKind.DECELERATE) and self.value <= 0:
            raise ScenarioError(f"{self.kind.value} needs a positive acceleration")

    @classmethod
    def still(cls) -> Maneuver:
        return cls(ManeuverKind.STILL)

    @classmethod
    def cruise(cls) -> Maneuver:
        return cls(ManeuverKind.CRUISE)

    @classmethod
    def accelerate(cls, accel: float) -> Maneuver:
        return cls(ManeuverKind.ACCELERATE, accel)

    @classmethod
    def decelerate(cls, decel: float) -> Maneuver:
        return cls(ManeuverKind.DECELERATE, decel)

    @classmethod
    def turn(cls, yaw_rate: float) -> Maneuver:
        return cls(ManeuverKind.TURN, yaw_rate)


@dataclass(frozen=True)
class Phase:
    duration_s: float
    vehicle1: Maneuver
    vehicle2: Maneuver
    name: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration_s) and self.duration_s > 0):
            raise ScenarioError(f"phase {self.name or '?'}: duration must be positive")


@dataclass(frozen=True)
class VehicleStart:
    x: float
    y: float
    heading: float  # radians, 0 = east, counter-clockwise
    speed: float

    def __post_init__(self) -> None:
        if self.speed < 0:
            raise ScenarioError("initial speed must be nonnegative")


@dataclass(frozen=True)
class ScenarioSpec:
    family: ScenarioFamily
    duration_s: float
    segment_plan: tuple[Phase, ...]
    start1: VehicleStart
    start2: VehicleStart
    rate_hz: float = 10.0
    noise_std_pos: float = 0.5
    noise_std_speed: float = 0.2
    seed: int = 0
    encounter_id: str = field(default="")

    def __post_init__(self) -> None:
        object.__setattr__(self, "segment_plan", tuple(self.segment_plan))
        if not self.segment_plan:
            raise ScenarioError("segment plan is empty")
        if not (self.duration_s > 0 and self.rate_hz > 0):
            raise ScenarioError("duration and rate must be positive")
        if self.noise_std_pos < 0 or self.noise_std_speed < 0:
            raise ScenarioError("noise levels must be nonnegative")
        total = sum(p.duration_s for p in self.segment_plan)
        if abs(total - self.duration_s) > 1e-9 * max(1.0, self.duration_s):
            raise ScenarioError(
                f"segment plan covers {total} s but the scenario lasts {self.duration_s} s"
            )
        boundaries = self.boundaries
        last = self.n_samples - 1
        if any(b < 1 or b > last for b in boundaries) or any(
            b2 <= b1 for b1, b2 in zip(boundaries, boundaries[1:])
        ):
            raise ScenarioError(f"phases shorter than one sample at {self.rate_hz} Hz")

    @property
    def n_samples(self) -> int:
        return round(self.duration_s * self.rate_hz) + 1

    @property
    def phase_starts(self) -> list[float]:
        starts = [0.0]
        for phase in self.segment_plan[:-1]:
            starts.append(starts[-1] + phase.duration_s)
        return starts

    @property
    def boundaries(self) -> list[int]:
        """Sample index at which each phase after the first begins."""
        return [round(start * self.rate_hz) for start in self.phase_starts[1:]]

    @classmethod
    def for_family(
        cls,
        family: ScenarioFamily | str,
        *,
        seed: int = 0,
        rate_hz: float = 10.0,
        noise_std_pos: float = 0.5,
        noise_std_speed: float = 0.2,
        segment_plan: tuple[Phase, ...] | list[Phase] | None = None,
        encounter_id: str = "",
    ) -> ScenarioSpec:
        """Spec with the family's default layout and, unless given, its default plan."""
        family = ScenarioFamily(family)
        start1, start2, default_plan = _FAMILY_DEFAULTS[family]
        plan = tuple(segment_plan) if segment_plan is not None else default_plan
        return cls(
            family=family,
            duration_s=sum(p.duration_s for p in plan),
            segment_plan=plan,
            start1=start1,
            start2=start2,
            rate_hz=rate_hz,
            noise_std_pos=noise_std_pos,
            noise_std_speed=noise_std_speed,
            seed=seed,
            encounter_id=encounter_id,
        )


_STILL, _CRUISE = Maneuver.still(), Maneuver.cruise()

_FAMILY_DEFAULTS: dict[ScenarioFamily, tuple[VehicleStart, VehicleStart, tuple[Phase, ...]]] = {
    ScenarioFamily.BOTH_STILL: (
        VehicleStart(0.0, 0.0, 0.0, 0.0),
        VehicleStart(8.0, 3.5, 0.0, 0.0),
        (Phase(10.0, _STILL, _STILL, "both still"),),
    ),
    # Paths cross at the origin at t = 5 s.
    ScenarioFamily.VERTICAL_CROSS: (
        VehicleStart(-40.0, 0.0, 0.0, 8.0),
        VehicleStart(0.0, -40.0, math.pi / 2, 8.0),
        (
            Phase(6.0, _CRUISE, _CRUISE, "approach"),
            Phase(6.0, Maneuver.accelerate(1.0), _CRUISE, "depart"),
        ),
    ),
    ScenarioFamily.SAME_DIRECTION: (
        VehicleStart(0.0, 0.0, 0.0, 10.0),
        VehicleStart(-15.0, 3.5, 0.0, 10.0),
        (
            Phase(5.0, _CRUISE, _CRUISE, "cruise"),
            Phase(5.0, Maneuver.decelerate(1.5), Maneuver.decelerate(1.5), "brake"),
        ),
    ),
    ScenarioFamily.OPPOSITE_DIRECTION: (
        VehicleStart(-30.0, 0.0, 0.0, 8.0),
        VehicleStart(30.0, 3.5, math.pi, 8.0),
        (
            Phase(6.0, _CRUISE, _CRUISE, "pass"),
            Phase(6.0, Maneuver.decelerate(2.0), _CRUISE, "stop"),
        ),
    ),
    ScenarioFamily.ONE_MOVING_ONE_STILL: (
        VehicleStart(-40.0, 0.0, 0.0, 6.0),
        VehicleStart(0.0, 10.0, -math.pi / 2, 0.0),
        (
            Phase(5.0, _CRUISE, _STILL, "approach"),
            Phase(4.0, Maneuver.decelerate(1.5), _STILL, "slow down"),
            Phase(3.0, _STILL, _STILL, "wait"),
        ),
    ),
    ScenarioFamily.FOLLOW_THEN_TURN: (
        VehicleStart(0.0, 0.0, 0.0, 8.0),
        VehicleStart(-12.0, 0.0, 0.0, 8.0),
        (
            Phase(5.0, _CRUISE, _CRUISE, "follow"),
            Phase(5.0, _CRUISE, Maneuver.turn(0.3), "turn"),
        ),
    ),
}
