"""
Gaussian emissions with a Normal-inverse-Wishart prior.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats

from ..errors import ConfigError
from .config import NiwPrior


_LOG_2PI = float(np.log(2.0 * np.pi))
_JITTER = 1e-9


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Standardization:
    """Per-dimension affine map applied to observations before inference."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", _readonly(self.mean))
        object.__setattr__(self, "scale", _readonly(self.scale))
        if self.mean.shape != self.scale.shape or np.any(self.scale <= 0):
            raise ValueError("standardization needs matching shapes and positive scales")

    @classmethod
    def identity(cls, dim: int) -> Standardization:
        return cls(mean=np.zeros(dim), scale=np.ones(dim))

    @classmethod
    def fit(cls, obs: np.ndarray) -> Standardization:
        """z-score parameters; zero-variance dimensions keep scale 1."""
        obs = np.asarray(obs, dtype=np.float64)
        std = obs.std(axis=0)
        return cls(mean=obs.mean(axis=0), scale=np.where(std > 0, std, 1.0))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def apply(self, obs: np.ndarray) -> np.ndarray:
        return (np.asarray(obs, dtype=np.float64) - self.mean) / self.scale


@dataclass(frozen=True, eq=False)
class GaussianEmission:
    """Multivariate normal observation density of one hidden state."""

    mean: np.ndarray
    covariance: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        mean = _readonly(self.mean)
        cov = _readonly(self.covariance)
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise ValueError("covariance shape does not match mean")
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("emission covariance is not positive definite") from None
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def log_density(self, obs: np.ndarray) -> np.ndarray:
        """Log N(obs | mean, covariance) for every row of obs."""
        obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
        z = linalg.solve_triangular(self._chol, (obs - self.mean).T, lower=True)
        log_det = 2.0 * np.log(np.diag(self._chol)).sum()
        return -0.5 * (self.dim * _LOG_2PI + log_det + np.einsum("ij,ij->j", z, z))


@dataclass(frozen=True, eq=False)
class NiwParameters:
    """Concrete NIW hyperparameters (mu, lambda, nu, psi)."""

    mu: np.ndarray
    lam: float
    nu: float
    psi: np.ndarray

    def posterior(self, data: np.ndarray) -> NiwParameters:
        """Conjugate update with the rows of `data`."""
        n = data.shape[0]
        if n == 0:
            return self
        xbar = data.mean(axis=0)
        centered = data - xbar
        scatter = centered.T @ centered
        lam_n = self.lam + n
        diff = xbar - self.mu
        psi_n = self.psi + scatter + (self.lam * n / lam_n) * np.outer(diff, diff)
        return NiwParameters(
            mu=(self.lam * self.mu + n * xbar) / lam_n,
            lam=lam_n,
            nu=self.nu + n,
            psi=0.5 * (psi_n + psi_n.T),
        )

    def sample(self, rng: np.random.Generator) -> GaussianEmission:
        """Draw (mean, covariance) from this NIW distribution."""
        sigma = stats.invwishart.rvs(df=self.nu, scale=self.psi, random_state=rng)
        sigma = 0.5 * (np.atleast_2d(sigma) + np.atleast_2d(sigma).T)
        sigma = _ensure_spd(sigma)
        chol = np.linalg.cholesky(sigma / self.lam)
        mean = self.mu + chol @ rng.standard_normal(self.mu.shape[0])
        return GaussianEmission(mean=mean, covariance=sigma)


def _ensure_spd(matrix: np.ndarray) -> np.ndarray:
    jitter = _JITTER * max(float(np.trace(matrix)) / matrix.shape[0], 1.0)
    for _ in range(10):
        try:
            np.linalg.cholesky(matrix)
            return matrix
        except np.linalg.LinAlgError:
            matrix = matrix + jitter * np.eye(matrix.shape[0])
            jitter *= 10.0
    raise np.linalg.LinAlgError("could not repair covariance draw")


def resolve_emission_prior(prior: NiwPrior, obs: np.ndarray) -> NiwParameters:
    """Fill data-adaptive defaults of the NIW prior from (standardized) observations."""
    dim = obs.shape[1]
    mu0 = np.asarray(prior.mu0, dtype=np.float64) if prior.mu0 is not None else obs.mean(axis=0)
    if prior.psi0 is not None:
        psi0 = np.asarray(prior.psi0, dtype=np.float64)
    else:
        cov = np.atleast_2d(np.cov(obs, rowvar=False, bias=True))
        psi0 = prior.psi_scale * cov + prior.psi_floor * np.eye(dim)
    if mu0.shape != (dim,) or psi0.shape != (dim, dim):
        raise ConfigError(f"emission prior does not match observation dimension {dim}")
    try:
        np.linalg.cholesky(psi0)
    except np.linalg.LinAlgError:
        raise ConfigError("emission prior scale matrix is not positive definite") from None
    return NiwParameters(mu=mu0, lam=prior.lambda0, nu=prior.nu0, psi=0.5 * (psi0 + psi0.T))


def emission_log_likelihoods(
    emissions: tuple[GaussianEmission, ...], obs: np.ndarray
) -> np.ndarray:
    """T x L matrix of per-state log densities."""
    return np.column_stack([e.log_density(obs) for e in emissions])
