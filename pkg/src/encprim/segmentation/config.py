"""
Configuration for the sticky HDP-HMM sampler.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator, model_validator


OBSERVATION_DIM = 6


class KappaMode(str, Enum):
    """How the stickiness value `kappa` is read."""

    MASS = "mass"  # additive self-transition mass, kappa >= 0
    PROPORTION = "proportion"  # rho = kappa / (alpha + kappa), kappa in [0, 1]


class GammaPrior(BaseModel):
    """Gamma(shape, rate) hyperprior on a concentration parameter."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    shape: float = Field(default=1.0, gt=0)
    rate: float = Field(default=0.01, gt=0)

    @property
    def mean(self) -> float:
        return self.shape / self.rate


class NiwPrior(BaseModel):
    """
    Normal-inverse-Wishart prior over per-state Gaussian emissions.

    `mu0` and `psi0` are optional; when unset they are derived from the
    (standardized) observations at fit time: mu0 = empirical mean and
    psi0 = psi_scale * empirical covariance + psi_floor * I.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mu0: list[float] | None = None
    lambda0: float = Field(default=0.01, gt=0)
    nu0: float = Field(default=OBSERVATION_DIM + 2.0)
    psi0: list[list[float]] | None = None
    psi_scale: float = Field(default=0.75, gt=0)
    psi_floor: float = Field(default=1e-3, ge=0)

    @field_validator("mu0")
    @classmethod
    def _check_mu0(cls, value: list[float] | None) -> list[float] | None:
        if value is not None and len(value) != OBSERVATION_DIM:
            raise ValueError(f"mu0 must have {OBSERVATION_DIM} entries")
        return value

    @field_validator("nu0")
    @classmethod
    def _check_nu0(cls, value: float) -> float:
        if value <= OBSERVATION_DIM + 1:
            raise ValueError(f"nu0 must exceed dimension + 1 = {OBSERVATION_DIM + 1}")
        return value

    @field_validator("psi0")
    @classmethod
    def _check_psi0(cls, value: list[list[float]] | None) -> list[list[float]] | None:
        if value is None:
            return value
        psi = np.asarray(value, dtype=np.float64)
        if psi.shape != (OBSERVATION_DIM, OBSERVATION_DIM):
            raise ValueError(f"psi0 must be {OBSERVATION_DIM}x{OBSERVATION_DIM}")
        if not np.allclose(psi, psi.T, rtol=0, atol=1e-12):
            raise ValueError("psi0 must be symmetric")
        try:
            np.linalg.cholesky(psi)
        except np.linalg.LinAlgError:
            raise ValueError("psi0 must be positive definite") from None
        return value


class HdpHmmConfig(BaseModel):
    """Weak-limit sticky HDP-HMM configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    truncation_level: int = Field(
        default=20,
        ge=2,
        validation_alias=AliasChoices("truncation_level", "truncation_L"),
        description="Maximum number of hidden states L",
    )
    iterations: int = Field(default=200, ge=1, description="Gibbs sweeps")
    kappa: float = Field(default=1.0, ge=0, description="Self-transition stickiness")
    kappa_mode: KappaMode = KappaMode.MASS
    resample_kappa: bool = False
    kappa_prior_c: float = Field(default=100.0, gt=0, description="Beta prior on rho (a)")
    kappa_prior_d: float = Field(default=1.0, gt=0, description="Beta prior on rho (b)")
    gamma_prior: GammaPrior = Field(default_factory=GammaPrior)
    alpha_prior: GammaPrior = Field(
        default_factory=GammaPrior, description="Hyperprior on alpha + kappa"
    )
    emission_prior: NiwPrior = Field(default_factory=NiwPrior)
    seed: int = Field(default=0, ge=0)
    burn_in_fraction: float = Field(default=0.5, ge=0, lt=1)
    standardize: bool = True
    alpha_floor: float = Field(default=1e-3, gt=0)
    concentration_iterations: int = Field(default=50, ge=1)

    @model_validator(mode="after")
    def _check_kappa(self) -> HdpHmmConfig:
        if self.kappa_mode == KappaMode.PROPORTION and self.kappa > 1:
            raise ValueError("kappa must lie in [0, 1] in proportion mode")
        if self.resample_kappa and self.kappa_mode != KappaMode.PROPORTION:
            raise ValueError("resample_kappa requires kappa_mode='proportion'")
        return self

    @property
    def burn_in(self) -> int:
        """Number of discarded leading sweeps (at least one sweep is retained)."""
        return min(int(self.iterations * self.burn_in_fraction), self.iterations - 1)
