"""
Random-variate helpers for the blocked Gibbs sampler.

Message passing, the auxiliary table counts and the concentration-parameter
updates all draw from a caller-owned numpy Generator.
"""

from __future__ import annotations

import numpy as np

from .config import GammaPrior


GAMMA_FLOOR = 1e-300
_MIN_CONCENTRATION = 1e-10


def sample_dirichlet(alpha: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Dirichlet draw (row-wise for 2-D input) from floored Gamma variates."""
    draws = np.maximum(rng.standard_gamma(np.asarray(alpha, dtype=np.float64)), GAMMA_FLOOR)
    return draws / draws.sum(axis=-1, keepdims=True)


def sample_discrete(weights: np.ndarray, rng: np.random.Generator) -> int:
    cumulative = np.cumsum(weights)
    if not cumulative[-1] > 0:
        return int(rng.integers(weights.shape[0]))
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, weights.shape[0] - 1)


def backward_messages(pi: np.ndarray, likelihoods: np.ndarray) -> np.ndarray:
    """
    Normalized backward messages.

    `likelihoods` is T x L with each row already scaled by its maximum.
    Row t holds p(y_{t+1:T} | x_t) up to a per-row constant.
    """
    n_steps, n_states = likelihoods.shape
    messages = np.ones((n_steps, n_states))
    for t in range(n_steps - 2, -1, -1):
        msg = pi @ (likelihoods[t + 1] * messages[t + 1])
        total = msg.sum()
        messages[t] = msg / total if total > 0 else 1.0 / n_states
    return messages


def sample_states(
    pi: np.ndarray,
    pi0: np.ndarray,
    log_likelihoods: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw a label sequence from its full conditional by backward filtering, forward sampling."""
    likelihoods = np.exp(log_likelihoods - log_likelihoods.max(axis=1, keepdims=True))
    messages = backward_messages(pi, likelihoods)
    n_steps = likelihoods.shape[0]
    labels = np.empty(n_steps, dtype=np.int64)
    weights = pi0
    for t in range(n_steps):
        labels[t] = sample_discrete(weights * likelihoods[t] * messages[t], rng)
        weights = pi[labels[t]]
    return labels


def transition_counts(labels: np.ndarray, n_states: int) -> tuple[np.ndarray, np.ndarray]:
    """(L x L transition counts, length-L initial-state count)."""
    counts = np.zeros((n_states, n_states), dtype=np.int64)
    np.add.at(counts, (labels[:-1], labels[1:]), 1)
    initial = np.zeros(n_states, dtype=np.int64)
    initial[labels[0]] = 1
    return counts, initial


def sample_table_counts(
    concentration: np.ndarray, counts: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """
    Number of occupied tables for each (restaurant, dish) given n customers.

    Customer i (0-based) opens a new table with probability a / (a + i).
    """
    tables = np.zeros_like(counts)
    for i, j in zip(*np.nonzero(counts)):
        n = int(counts[i, j])
        a = concentration[i, j]
        tables[i, j] = 1 + int((rng.random(n - 1) < a / (a + np.arange(1, n))).sum())
    return tables


def sample_overrides(
    tables: np.ndarray, beta: np.ndarray, rho: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """
    Split self-transition tables into those explained by stickiness.

    Returns the corrected table counts and the per-state override counts.
    Only the first L rows (transition restaurants) carry a diagonal.
    """
    n_states = beta.shape[0]
    corrected = tables.copy()
    overrides = np.zeros(n_states, dtype=np.int64)
    if rho <= 0:
        return corrected, overrides
    for j in range(n_states):
        m = int(tables[j, j])
        if m == 0:
            continue
        p = rho / (rho + beta[j] * (1.0 - rho))
        overrides[j] = rng.binomial(m, min(p, 1.0))
        corrected[j, j] = m - overrides[j]
    return corrected, overrides


def resample_concentration(
    value: float,
    numdata: np.ndarray,
    numclass: np.ndarray,
    prior: GammaPrior,
    rng: np.random.Generator,
    iterations: int = 50,
) -> float:
    """
    Auxiliary-variable update of a DP concentration under a Gamma prior.

    `numdata[j]` customers sit at `numclass[j]` tables in restaurant j.
    Restaurants without customers carry no information and are ignored.
    """
    numdata = np.atleast_1d(np.asarray(numdata, dtype=np.float64))
    numclass = np.atleast_1d(np.asarray(numclass, dtype=np.float64))
    keep = numdata > 0
    if not keep.any():
        return max(rng.gamma(prior.shape) / prior.rate, _MIN_CONCENTRATION)
    numdata, numclass = numdata[keep], numclass[keep]
    total_tables = numclass.sum()
    for _ in range(iterations):
        xj = np.maximum(rng.beta(value + 1.0, numdata), GAMMA_FLOOR)
        zj = rng.random(numdata.shape[0]) * (value + numdata) < numdata
        shape = prior.shape + total_tables - zj.sum()
        rate = prior.rate - np.log(xj).sum()
        value = max(rng.gamma(shape) / rate, _MIN_CONCENTRATION)
    return float(value)
