"""Heat-bath Gibbs sampler for static Ising models.

All chains advance together as rows of one matrix. Chain k draws its initial
state and its uniforms from its own Philox substream (seed, chain k), so the
samples of a chain never depend on how many chains run, how they are split
across workers, or how many sweeps of uniforms are drawn at a time.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.special import expit

from src.lib.config import BREADTH_HISTOGRAM_BINS, GIBBS_SWEEP_BLOCK
from src.lib.random_streams import generator
from src.models.histogram import Histogram
from src.models.moments import MomentSet
from src.models.static_ising import GibbsConfig, StaticIsingModel

logger = logging.getLogger(__name__)


def gibbs_conditional(model: StaticIsingModel, s: np.ndarray, i: int) -> float:
    """
    P(s_i = +1 | rest) = e^theta / (e^theta + e^-theta), theta = h_i + sum_j J_ij s_j.

    Examples:
        >>> m = StaticIsingModel(np.array([0.3]), np.zeros((1, 1)))
        >>> round(gibbs_conditional(m, np.array([1]), 0), 5)
        0.64566
    """
    theta = model.h[i] + float(model.J[i] @ np.asarray(s, dtype=np.float64))
    return float(expit(2.0 * theta))


def _scan_orders(cfg: GibbsConfig, n: int, total_sweeps: int) -> np.ndarray | None:
    if cfg.scan == "systematic":
        return None
    rng = generator(cfg.seed, "gibbs_scan")
    return np.stack([rng.permutation(n) for _ in range(total_sweeps)])


def _run_chains(
    model: StaticIsingModel, cfg: GibbsConfig, chains: np.ndarray, orders: np.ndarray | None
) -> np.ndarray:
    """Samples for a group of chain indices, shape (len(chains), n_samples, N)."""
    n = model.n
    streams = [generator(cfg.seed, "gibbs_chain", int(k)) for k in chains]
    state = np.stack([np.where(rng.random(n) < 0.5, 1.0, -1.0) for rng in streams])
    samples = np.empty((len(chains), cfg.n_samples, n), dtype=np.int8)

    h = model.h
    couplings = np.ascontiguousarray(model.J)
    systematic = np.arange(n)
    total_sweeps = cfg.burn_in_sweeps + cfg.n_samples * cfg.sweeps_per_sample
    recorded = 0
    sweep = 0
    while sweep < total_sweeps:
        block = min(GIBBS_SWEEP_BLOCK, total_sweeps - sweep)
        uniforms = np.stack([rng.random((block, n)) for rng in streams], axis=1)
        for b in range(block):
            order = systematic if orders is None else orders[sweep]
            u = uniforms[b]
            for i in order:
                theta = h[i] + (state * couplings[i]).sum(axis=1)
                state[:, i] = np.where(u[:, i] < expit(2.0 * theta), 1.0, -1.0)
            sweep += 1
            done = sweep - cfg.burn_in_sweeps
            if done > 0 and done % cfg.sweeps_per_sample == 0:
                samples[:, recorded] = state
                recorded += 1
    return samples


def sample_chain(model: StaticIsingModel, cfg: GibbsConfig) -> np.ndarray:
    """
    Draw ``n_chains * n_samples`` configurations.

    Each chain starts from a uniformly random state, runs ``burn_in_sweeps``
    sweeps, then records one sample every ``sweeps_per_sample`` sweeps.

    Returns:
        int8 array of shape (n_chains * n_samples, N), chain-major
        (rows k*n_samples .. (k+1)*n_samples-1 belong to chain k)
    """
    total_sweeps = cfg.burn_in_sweeps + cfg.n_samples * cfg.sweeps_per_sample
    orders = _scan_orders(cfg, model.n, total_sweeps)
    groups = [g for g in np.array_split(np.arange(cfg.n_chains), cfg.workers) if g.size]
    logger.debug(
        f"Gibbs: N={model.n}, {cfg.n_chains} chains x {cfg.n_samples} samples, "
        f"{total_sweeps} sweeps, {len(groups)} worker groups, scan={cfg.scan}"
    )

    if len(groups) == 1:
        parts = [_run_chains(model, cfg, groups[0], orders)]
    else:
        with ThreadPoolExecutor(max_workers=len(groups)) as pool:
            parts = list(pool.map(lambda g: _run_chains(model, cfg, g, orders), groups))

    return np.concatenate(parts, axis=0).reshape(cfg.total_samples, model.n)


def model_moments_mc(model: StaticIsingModel, cfg: GibbsConfig) -> MomentSet:
    """Sample moments of ``sample_chain`` output."""
    return MomentSet.from_samples(sample_chain(model, cfg))


def model_breadth_distribution(
    model: StaticIsingModel, cfg: GibbsConfig, bins: int = BREADTH_HISTOGRAM_BINS
) -> Histogram:
    """Histogram of (1/N) sum_i s_i over Gibbs samples; counts sum to the sample count."""
    samples = sample_chain(model, cfg)
    return Histogram.from_values(
        samples.mean(axis=1, dtype=np.float64), bins, value_range=(-1.0, 1.0)
    )
