"""Exact enumeration oracle for small static Ising models.

All 2^N configurations are enumerated in chunks; state k has spin
s_i = +1 when bit i of k is set. Sums are taken in the log domain with
``scipy.special.logsumexp``.
"""

from collections.abc import Iterator

import numpy as np
from scipy.special import logsumexp

from src.lib.config import ORACLE_MAX_N
from src.lib.errors import OracleSizeError
from src.models.moments import MomentSet
from src.models.static_ising import StaticIsingModel

STATE_CHUNK = 1 << 16


def _check_size(n: int) -> None:
    if n > ORACLE_MAX_N:
        raise OracleSizeError(n, ORACLE_MAX_N)


def state_block(n: int, start: int, stop: int) -> np.ndarray:
    """Configurations ``start..stop-1`` as a float64 matrix of +1/-1."""
    index = np.arange(start, stop, dtype=np.uint32)[:, None]
    bits = (index >> np.arange(n, dtype=np.uint32)[None, :]) & np.uint32(1)
    return 2.0 * bits.astype(np.float64) - 1.0


def all_states(n: int) -> np.ndarray:
    """Every configuration of N spins, in state-index order."""
    _check_size(n)
    return state_block(n, 0, 1 << n)


def _chunks(n: int) -> Iterator[np.ndarray]:
    total = 1 << n
    for start in range(0, total, STATE_CHUNK):
        yield state_block(n, start, min(start + STATE_CHUNK, total))


def _log_weights(model: StaticIsingModel, states: np.ndarray) -> np.ndarray:
    """-E(s) for each row: h.s + sum_{i<j} J_ij s_i s_j."""
    return states @ model.h + 0.5 * np.einsum("ki,ij,kj->k", states, model.J, states)


def energy(model: StaticIsingModel, s: np.ndarray) -> float:
    """
    Ising energy -sum_i h_i s_i - sum_{i<j} J_ij s_i s_j.

    Example:
        >>> m = StaticIsingModel(np.zeros(2), np.array([[0, 0.5], [0.5, 0]]))
        >>> energy(m, np.array([1, 1]))
        -0.5
    """
    spins = np.asarray(s, dtype=np.float64)
    return float(-(model.h @ spins) - 0.5 * spins @ model.J @ spins)


def log_partition(model: StaticIsingModel) -> float:
    """log Z by exact enumeration (N <= 20)."""
    _check_size(model.n)
    partial = [logsumexp(_log_weights(model, states)) for states in _chunks(model.n)]
    return float(logsumexp(partial))


def exact_partition(model: StaticIsingModel) -> float:
    """
    Partition function Z.

    May overflow to inf for very large parameters; use ``log_partition`` then.

    Raises:
        OracleSizeError: N > 20
    """
    return float(np.exp(log_partition(model)))


def exact_distribution(model: StaticIsingModel) -> np.ndarray:
    """Boltzmann probabilities of all 2^N states, in state-index order."""
    log_z = log_partition(model)
    return np.concatenate(
        [np.exp(_log_weights(model, states) - log_z) for states in _chunks(model.n)]
    )


def exact_moments(model: StaticIsingModel) -> MomentSet:
    """
    Exact <s_i> and <s_i s_j> under the Boltzmann distribution.

    Raises:
        OracleSizeError: N > 20
    """
    log_z = log_partition(model)
    n = model.n
    m1 = np.zeros(n)
    m2 = np.zeros((n, n))
    for states in _chunks(n):
        p = np.exp(_log_weights(model, states) - log_z)
        m1 += p @ states
        m2 += states.T @ (p[:, None] * states)
    return MomentSet(m1, m2)


def average_log_likelihood(model: StaticIsingModel, target: MomentSet) -> float:
    """
    Mean log-probability of data summarized by ``target`` moments.

    Equals sum_i h_i m1_i + sum_{i<j} J_ij m2_ij - log Z; its gradient is the
    moment difference returned by ``static_gradient`` with exact model moments.
    """
    iu = np.triu_indices(model.n, k=1)
    linear = float(model.h @ target.m1 + np.sum(model.J[iu] * target.m2[iu]))
    return linear - log_partition(model)
