"""
Synthetic labeled encounters.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..encounters import (
    CoordinateFrame,
    DrivingEncounter,
    save_encounter_csv,
    unproject_to_geographic,
)
from ..errors import ScenarioError
from ..utils import derive_seed
from .scenarios import Maneuver, ManeuverKind, ScenarioFamily, ScenarioSpec, VehicleStart


logger = logging.getLogger(__name__)

DEFAULT_ORIGIN = (42.28, -83.74)
TRUTH_SUFFIX = ".truth.csv"


@dataclass(frozen=True, eq=False)
class LabeledEncounter:
    """An encounter with its planted phase labels."""

    encounter: DrivingEncounter
    truth_boundaries: np.ndarray
    truth_labels: np.ndarray
    family: ScenarioFamily | None = None

    def __post_init__(self) -> None:
        boundaries = np.array(self.truth_boundaries, dtype=np.int64)
        labels = np.array(self.truth_labels, dtype=np.int64)
        n = self.encounter.n_samples
        if labels.shape != (n,):
            raise ScenarioError(f"expected {n} truth labels, got {labels.shape[0]}")
        if boundaries.size and (
            np.any(np.diff(boundaries) <= 0) or boundaries[0] < 1 or boundaries[-1] > n - 1
        ):
            raise ScenarioError("truth boundaries must be strictly increasing within [1, T-1]")
        boundaries.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "truth_boundaries", boundaries)
        object.__setattr__(self, "truth_labels", labels)

    @property
    def id(self) -> str:
        return self.encounter.id


def _advance(
    start: VehicleStart, maneuver: Maneuver, tau: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form (x, y, heading, speed) after tau seconds of one maneuver."""
    x0, y0, h0, s0 = start.x, start.y, start.heading, start.speed
    heading = np.full_like(tau, h0)
    kind = maneuver.kind
    if kind == ManeuverKind.STILL:
        speed = np.zeros_like(tau)
        dist = np.zeros_like(tau)
    elif kind == ManeuverKind.CRUISE:
        speed = np.full_like(tau, s0)
        dist = s0 * tau
    elif kind == ManeuverKind.ACCELERATE:
        a = maneuver.value
        speed = s0 + a * tau
        dist = s0 * tau + 0.5 * a * tau**2
    elif kind == ManeuverKind.DECELERATE:
        a = maneuver.value
        moving = np.minimum(tau, s0 / a)
        speed = np.maximum(s0 - a * tau, 0.0)
        dist = s0 * moving - 0.5 * a * moving**2
    else:
        omega = maneuver.value
        speed = np.full_like(tau, s0)
        if omega == 0:
            dist = s0 * tau
        else:
            heading = h0 + omega * tau
            radius = s0 / omega
            return (
                x0 + radius * (np.sin(heading) - np.sin(h0)),
                y0 - radius * (np.cos(heading) - np.cos(h0)),
                heading,
                speed,
            )
    return x0 + dist * np.cos(h0), y0 + dist * np.sin(h0), heading, speed


def _vehicle_track(
    start: VehicleStart,
    maneuvers: Sequence[Maneuver],
    starts: Sequence[float],
    durations: Sequence[float],
    t: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.empty_like(t)
    y = np.empty_like(t)
    v = np.empty_like(t)
    phase_of = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
    state = start
    for p, (maneuver, begin, duration) in enumerate(zip(maneuvers, starts, durations)):
        mask = phase_of == p
        xs, ys, hs, vs = _advance(state, maneuver, t[mask] - begin)
        x[mask], y[mask], v[mask] = xs, ys, vs
        end = _advance(state, maneuver, np.array([duration]))
        state = VehicleStart(float(end[0][0]), float(end[1][0]), float(end[2][0]), float(end[3][0]))
    return x, y, v


def generate_encounter(spec: ScenarioSpec) -> LabeledEncounter:
    """Piecewise-kinematic two-vehicle encounter with i.i.d. Gaussian noise.

    Deterministic given spec.seed.
    """
    n = spec.n_samples
    t = np.arange(n) / spec.rate_hz
    starts = spec.phase_starts
    durations = [p.duration_s for p in spec.segment_plan]
    plan = spec.segment_plan
    x1, y1, v1 = _vehicle_track(spec.start1, [p.vehicle1 for p in plan], starts, durations, t)
    x2, y2, v2 = _vehicle_track(spec.start2, [p.vehicle2 for p in plan], starts, durations, t)

    rng = np.random.default_rng(spec.seed)
    positions = np.column_stack([x1, y1, x2, y2])
    speeds = np.column_stack([v1, v2])
    if spec.noise_std_pos > 0:
        positions = positions + rng.normal(0.0, spec.noise_std_pos, positions.shape)
    if spec.noise_std_speed > 0:
        speeds = np.maximum(speeds + rng.normal(0.0, spec.noise_std_speed, speeds.shape), 0.0)

    data = np.column_stack([t, positions[:, 0:2], speeds[:, 0], positions[:, 2:4], speeds[:, 1]])
    boundaries = np.array(spec.boundaries, dtype=np.int64)
    labels = np.zeros(n, dtype=np.int64)
    for phase_id, b in enumerate(boundaries, start=1):
        labels[b:] = phase_id

    encounter = DrivingEncounter(
        id=spec.encounter_id or f"{spec.family.value}_{spec.seed}",
        data=data,
        rate_hz=spec.rate_hz,
        frame=CoordinateFrame.LOCAL_METERS,
    )
    return LabeledEncounter(encounter, boundaries, labels, family=spec.family)


def generate_planted_encounter(
    n_states: int = 3,
    length: int = 300,
    separation: float = 5.0,
    *,
    rate_hz: float = 10.0,
    noise_std_pos: float = 0.5,
    noise_std_speed: float = 0.2,
    stay_probability: float = 0.97,
    base_speed: float = 10.0,
    seed: int = 0,
    encounter_id: str = "planted",
) -> LabeledEncounter:
    """
    Observations drawn from a sticky n-state HMM with constant per-state means.

    State means differ by `separation` noise standard deviations in every
    dimension, so the truth labels are the hidden states themselves.
    """
    if n_states < 1 or length < 2:
        raise ScenarioError("need at least one state and two samples")
    if not 0 <= stay_probability <= 1:
        raise ScenarioError("stay_probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)

    states = np.empty(length, dtype=np.int64)
    states[0] = rng.integers(n_states)
    for i in range(1, length):
        if n_states > 1 and rng.random() >= stay_probability:
            others = [s for s in range(n_states) if s != states[i - 1]]
            states[i] = others[rng.integers(len(others))]
        else:
            states[i] = states[i - 1]

    sigma = np.array([noise_std_pos] * 4 + [noise_std_speed] * 2)
    offset = np.array([0.0, 0.0, 20.0, 5.0, base_speed, base_speed])
    means = offset + np.arange(n_states)[:, None] * separation * sigma
    obs = means[states] + rng.standard_normal((length, 6)) * sigma
    obs[:, 4:] = np.maximum(obs[:, 4:], 0.0)

    t = np.arange(length) / rate_hz
    data = np.column_stack([t, obs[:, 0:2], obs[:, 4], obs[:, 2:4], obs[:, 5]])
    encounter = DrivingEncounter(
        id=encounter_id, data=data, rate_hz=rate_hz, frame=CoordinateFrame.LOCAL_METERS
    )
    boundaries = np.flatnonzero(states[1:] != states[:-1]) + 1
    return LabeledEncounter(encounter, boundaries, states)


def generate_corpus(
    n: int,
    seed: int = 0,
    families: Sequence[ScenarioFamily | str] | None = None,
    *,
    rate_hz: float = 10.0,
    noise_std_pos: float = 0.5,
    noise_std_speed: float = 0.2,
) -> list[LabeledEncounter]:
    """n encounters cycling through `families` (all six by default)."""
    if n < 1:
        raise ScenarioError("corpus size must be positive")
    chosen = [ScenarioFamily(f) for f in families] if families else list(ScenarioFamily)
    corpus = []
    for i in range(n):
        family = chosen[i % len(chosen)]
        spec = ScenarioSpec.for_family(
            family,
            seed=derive_seed(seed, i),
            rate_hz=rate_hz,
            noise_std_pos=noise_std_pos,
            noise_std_speed=noise_std_speed,
            encounter_id=f"enc_{i:04d}_{family.value}",
        )
        corpus.append(generate_encounter(spec))
    logger.info("Generated %d synthetic encounters over %d families", n, len(chosen))
    return corpus


def write_labeled_encounter(
    le: LabeledEncounter,
    directory: Path | str,
    origin: tuple[float, float] = DEFAULT_ORIGIN,
) -> tuple[Path, Path]:
    """Write <id>.csv in the geographic schema plus the <id>.truth.csv sidecar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    geographic = unproject_to_geographic(le.encounter, *origin)
    csv_path = save_encounter_csv(geographic, directory / f"{le.id}.csv")
    truth_path = directory / f"{le.id}{TRUTH_SUFFIX}"
    pd.DataFrame(
        {"sample_index": np.arange(le.truth_labels.shape[0]), "phase_id": le.truth_labels}
    ).to_csv(truth_path, index=False, lineterminator="\n")
    return csv_path, truth_path


def read_truth_labels(path: Path | str) -> np.ndarray:
    frame = pd.read_csv(path)
    if list(frame.columns) != ["sample_index", "phase_id"]:
        raise ScenarioError(f"{path}: expected columns sample_index,phase_id")
    return frame.sort_values("sample_index")["phase_id"].to_numpy(dtype=np.int64)
