"""
Sticky HDP-HMM parameter and state-sequence containers, and the joint log-probability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encounters import DrivingEncounter
from ..errors import SegmentationError
from .emissions import GaussianEmission, Standardization, emission_log_likelihoods


SIMPLEX_TOLERANCE = 1e-9


def _readonly(array: np.ndarray, dtype: type = np.float64) -> np.ndarray:
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StickyHdpHmmModel:
    """
    One posterior sample of the truncated sticky HDP-HMM.

    `pi0` defaults to `beta` and `standardization` to the identity map, so a
    model written by hand describes raw observations.
    """

    beta: np.ndarray
    pi: np.ndarray
    emissions: tuple[GaussianEmission, ...]
    gamma: float
    alpha: float
    kappa: float
    pi0: np.ndarray | None = None
    standardization: Standardization | None = None

    def __post_init__(self) -> None:
        beta = _readonly(self.beta)
        pi = _readonly(np.atleast_2d(self.pi))
        n_states = beta.shape[0]
        if pi.shape != (n_states, n_states):
            raise SegmentationError(f"pi must be {n_states}x{n_states}, got {pi.shape}")
        if len(self.emissions) != n_states:
            raise SegmentationError(f"expected {n_states} emissions, got {len(self.emissions)}")
        pi0 = beta if self.pi0 is None else _readonly(self.pi0)
        if pi0.shape != (n_states,):
            raise SegmentationError("pi0 must match the number of states")
        standardization = self.standardization or Standardization.identity(self.emissions[0].dim)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "pi0", pi0)
        object.__setattr__(self, "emissions", tuple(self.emissions))
        object.__setattr__(self, "standardization", standardization)

    @property
    def n_states(self) -> int:
        return self.beta.shape[0]

    @property
    def dim(self) -> int:
        return self.emissions[0].dim

    def validate(self, tol: float = SIMPLEX_TOLERANCE) -> None:
        """Raise SegmentationError unless beta, pi0, pi rows and covariances are valid."""
        for name, arr in (("beta", self.beta), ("pi0", self.pi0)):
            if np.any(arr < 0) or abs(arr.sum() - 1.0) > tol:
                raise SegmentationError(f"{name} is not on the simplex")
        if np.any(self.pi < 0) or np.any(np.abs(self.pi.sum(axis=1) - 1.0) > tol):
            raise SegmentationError("pi has a row off the simplex")
        for k, emission in enumerate(self.emissions):
            try:
                np.linalg.cholesky(emission.covariance)
            except np.linalg.LinAlgError:
                raise SegmentationError(f"emission {k} covariance is not SPD") from None

    def log_likelihoods(self, obs: np.ndarray, *, standardized: bool = False) -> np.ndarray:
        y = obs if standardized else self.standardization.apply(obs)
        return emission_log_likelihoods(self.emissions, y)


@dataclass(frozen=True, eq=False)
class StateSequence:
    """Per-sample hidden-state labels of one encounter."""

    encounter_id: str
    labels: np.ndarray
    log_joint: float

    def __post_init__(self) -> None:
        labels = _readonly(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise SegmentationError("labels must be one-dimensional")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.labels.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateSequence):
            return NotImplemented
        return (
            self.encounter_id == other.encounter_id
            and self.log_joint == other.log_joint
            and np.array_equal(self.labels, other.labels)
        )


def log_joint_from_observations(
    model: StickyHdpHmmModel,
    labels: np.ndarray,
    obs: np.ndarray,
    *,
    standardized: bool = False,
) -> float:
    """
    log p(x_0) + sum_t log pi[x_{t-1}, x_t] + sum_t log N(y_t | theta_{x_t}).

    `obs` holds raw observations unless `standardized` is set.
    """
    labels = np.asarray(labels)
    obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
    if labels.ndim != 1 or labels.shape[0] != obs.shape[0]:
        raise SegmentationError(
            f"{labels.shape[0]} labels for {obs.shape[0]} observations"
        )
    if obs.shape[1] != model.dim:
        raise SegmentationError(f"observations have dimension {obs.shape[1]}, model {model.dim}")
    if labels.size == 0:
        raise SegmentationError("empty label sequence")
    if labels.min() < 0 or labels.max() >= model.n_states:
        raise SegmentationError(f"label out of range [0, {model.n_states})")

    loglik = model.log_likelihoods(obs, standardized=standardized)
    with np.errstate(divide="ignore"):
        initial = np.log(model.pi0[labels[0]])
        transitions = np.log(model.pi[labels[:-1], labels[1:]]).sum()
    emissions = loglik[np.arange(labels.shape[0]), labels].sum()
    return float(initial + transitions + emissions)


def log_joint_probability(
    model: StickyHdpHmmModel, labels: StateSequence, enc: DrivingEncounter
) -> float:
    """Joint log-probability of an encounter's observations and labels under `model`."""
    if len(labels) != enc.n_samples:
        raise SegmentationError(
            f"state sequence has {len(labels)} labels,"
            f" encounter {enc.id} has {enc.n_samples} samples"
        )
    return log_joint_from_observations(model, labels.labels, enc.observations())
