"""
Blocked Gibbs sampler for the weak-limit sticky HDP-HMM.

One sweep resamples, in order: the label sequence (backward filtering,
forward sampling), auxiliary table and override counts, the global weights
beta, the transition rows and initial distribution, the per-state emission
parameters, and finally the concentration parameters.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..encounters import CoordinateFrame, DrivingEncounter
from ..errors import SegmentationError
from .config import HdpHmmConfig, KappaMode
from .emissions import (
    GaussianEmission,
    NiwParameters,
    Standardization,
    emission_log_likelihoods,
    resolve_emission_prior,
)
from .model import StateSequence, StickyHdpHmmModel, log_joint_from_observations
from .sampling import (
    resample_concentration,
    sample_dirichlet,
    sample_overrides,
    sample_states,
    sample_table_counts,
    transition_counts,
)


logger = logging.getLogger(__name__)

ProgressCallback = Callable[[str, dict[str, Any]], None]


@dataclass(frozen=True)
class SweepStats:
    """Summary of one Gibbs sweep."""

    sweep: int
    log_joint: float
    n_change_points: int
    n_occupied: int
    gamma: float
    alpha: float
    kappa: float


@dataclass(frozen=True)
class SamplerTrace:
    sweeps: tuple[SweepStats, ...]
    burn_in: int

    @property
    def retained(self) -> tuple[SweepStats, ...]:
        return self.sweeps[self.burn_in :]

    def log_joints(self) -> np.ndarray:
        return np.array([s.log_joint for s in self.sweeps])


@dataclass(frozen=True)
class SegmentationFit:
    """Retained posterior sample plus the sampler's trace."""

    model: StickyHdpHmmModel
    sequence: StateSequence
    trace: SamplerTrace
    retained_sweep: int


def count_change_points(labels: np.ndarray) -> int:
    """Number of t with labels[t] != labels[t-1]."""
    labels = np.asarray(labels)
    return int(np.count_nonzero(labels[1:] != labels[:-1]))


def mean_change_points(trace: SamplerTrace) -> float:
    """Change points averaged over the post-burn-in sweeps."""
    return float(np.mean([s.n_change_points for s in trace.retained]))


class GibbsSampler:
    """
    Sticky HDP-HMM sampler over one observation sequence.

    Each instance owns nothing but its configuration; `run` creates a fresh
    Generator from `config.seed`, so repeated runs are identical.
    """

    def __init__(self, config: HdpHmmConfig):
        self.config = config

    def _split_concentration(self, total: float, rho: float) -> tuple[float, float]:
        """(alpha, kappa) from alpha + kappa and, in proportion mode, rho."""
        cfg = self.config
        if cfg.kappa_mode == KappaMode.PROPORTION:
            return max(total * (1.0 - rho), cfg.alpha_floor), total * rho
        return max(total - cfg.kappa, cfg.alpha_floor), cfg.kappa

    def _sample_transitions(
        self,
        alpha: float,
        kappa: float,
        beta: np.ndarray,
        counts: np.ndarray,
        initial: np.ndarray,
        rng: np.random.Generator,
    ) -> tuple[np.ndarray, np.ndarray]:
        n_states = beta.shape[0]
        pi = sample_dirichlet(alpha * beta + counts + kappa * np.eye(n_states), rng)
        pi0 = sample_dirichlet(alpha * beta + initial, rng)
        return pi, pi0

    def _sample_emissions(
        self,
        prior: NiwParameters,
        y: np.ndarray,
        labels: np.ndarray | None,
        rng: np.random.Generator,
    ) -> tuple[GaussianEmission, ...]:
        n_states = self.config.truncation_level
        if labels is None:
            return tuple(prior.sample(rng) for _ in range(n_states))
        return tuple(prior.posterior(y[labels == k]).sample(rng) for k in range(n_states))

    def run(
        self,
        obs: np.ndarray,
        encounter_id: str = "",
        progress: ProgressCallback | None = None,
    ) -> SegmentationFit:
        cfg = self.config
        obs = np.asarray(obs, dtype=np.float64)
        if obs.ndim != 2 or obs.shape[0] < 2:
            raise SegmentationError(f"need at least 2 observations, got shape {obs.shape}")
        if not np.all(np.isfinite(obs)):
            raise SegmentationError("observations contain non-finite values")

        if cfg.standardize:
            standardization = Standardization.fit(obs)
        else:
            standardization = Standardization.identity(obs.shape[1])
        y = standardization.apply(obs)
        constant = bool(np.all(np.ptp(y, axis=0) == 0))
        if constant:
            logger.warning(
                "Encounter %s has constant observations; keeping a single state", encounter_id
            )

        prior = resolve_emission_prior(cfg.emission_prior, y)
        rng = np.random.default_rng(cfg.seed)
        n_states = cfg.truncation_level
        n_steps = y.shape[0]

        total = cfg.alpha_prior.mean
        gamma = cfg.gamma_prior.mean
        rho = cfg.kappa if cfg.kappa_mode == KappaMode.PROPORTION else 0.0
        alpha, kappa = self._split_concentration(total, rho)

        beta = sample_dirichlet(np.full(n_states, gamma / n_states), rng)
        pi, pi0 = self._sample_transitions(
            alpha, kappa, beta, np.zeros((n_states, n_states)), np.zeros(n_states), rng
        )
        emissions = self._sample_emissions(prior, y, None, rng)
        labels = np.zeros(n_steps, dtype=np.int64)

        burn_in = cfg.burn_in
        stats: list[SweepStats] = []
        best: tuple[float, int, StickyHdpHmmModel, np.ndarray] | None = None

        for sweep in range(cfg.iterations):
            if not constant:
                labels = sample_states(pi, pi0, emission_log_likelihoods(emissions, y), rng)

            counts, initial = transition_counts(labels, n_states)
            restaurant_counts = np.vstack([counts, initial])
            concentration = alpha * np.tile(beta, (n_states + 1, 1))
            concentration[:n_states] += kappa * np.eye(n_states)
            tables = sample_table_counts(concentration, restaurant_counts, rng)
            rho_now = kappa / (alpha + kappa) if alpha + kappa > 0 else 0.0
            corrected, overrides = sample_overrides(tables, beta, rho_now, rng)

            beta = sample_dirichlet(gamma / n_states + corrected.sum(axis=0), rng)
            pi, pi0 = self._sample_transitions(alpha, kappa, beta, counts, initial, rng)
            emissions = self._sample_emissions(prior, y, labels, rng)

            total = resample_concentration(
                alpha + kappa,
                counts.sum(axis=1),
                tables[:n_states].sum(axis=1),
                cfg.alpha_prior,
                rng,
                cfg.concentration_iterations,
            )
            gamma = resample_concentration(
                gamma,
                corrected.sum(),
                np.count_nonzero(corrected.sum(axis=0)),
                cfg.gamma_prior,
                rng,
                cfg.concentration_iterations,
            )
            if cfg.resample_kappa:
                n_overrides = overrides.sum()
                rho = rng.beta(
                    cfg.kappa_prior_c + n_overrides,
                    cfg.kappa_prior_d + tables[:n_states].sum() - n_overrides,
                )
            alpha, kappa = self._split_concentration(total, rho)

            model = StickyHdpHmmModel(
                beta=beta,
                pi=pi,
                emissions=emissions,
                gamma=gamma,
                alpha=alpha,
                kappa=kappa,
                pi0=pi0,
                standardization=standardization,
            )
            log_joint = log_joint_from_observations(model, labels, y, standardized=True)
            sweep_stats = SweepStats(
                sweep=sweep,
                log_joint=log_joint,
                n_change_points=count_change_points(labels),
                n_occupied=int(np.unique(labels).size),
                gamma=gamma,
                alpha=alpha,
                kappa=kappa,
            )
            stats.append(sweep_stats)
            logger.debug(
                "sweep %d: log_joint=%.3f states=%d changes=%d",
                sweep,
                log_joint,
                sweep_stats.n_occupied,
                sweep_stats.n_change_points,
            )
            if progress is not None:
                progress("sweep", {"stats": sweep_stats, "model": model, "labels": labels.copy()})

            if sweep >= burn_in and (best is None or log_joint > best[0]):
                best = (log_joint, sweep, model, labels.copy())

        assert best is not None
        log_joint, retained_sweep, model, retained_labels = best
        return SegmentationFit(
            model=model,
            sequence=StateSequence(
                encounter_id=encounter_id, labels=retained_labels, log_joint=log_joint
            ),
            trace=SamplerTrace(sweeps=tuple(stats), burn_in=burn_in),
            retained_sweep=retained_sweep,
        )


def fit_segmentation(
    enc: DrivingEncounter, cfg: HdpHmmConfig
) -> tuple[StickyHdpHmmModel, StateSequence]:
    """Segment one projected encounter; deterministic given (enc, cfg)."""
    fit = fit_segmentation_trace(enc, cfg)
    return fit.model, fit.sequence


def fit_segmentation_trace(
    enc: DrivingEncounter, cfg: HdpHmmConfig, progress: ProgressCallback | None = None
) -> SegmentationFit:
    """As `fit_segmentation`, keeping the sampler trace."""
    if enc.frame != CoordinateFrame.LOCAL_METERS:
        raise SegmentationError(f"encounter {enc.id} must be projected to local meters first")
    if enc.n_samples < 2:
        raise SegmentationError(f"encounter {enc.id} has fewer than 2 samples")
    return GibbsSampler(cfg).run(enc.observations(), encounter_id=enc.id, progress=progress)
