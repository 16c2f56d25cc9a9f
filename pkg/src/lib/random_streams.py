"""Deterministic random streams.

Every consumer of randomness asks for a stream keyed by (seed, purpose, index).
Streams come from numpy's counter-based Philox bit generator seeded through
``SeedSequence``, so chain ``k`` of a run draws the same numbers no matter how
many chains or workers the run uses.
"""

import numpy as np

from src.lib.errors import ValidationError

# Stable integer codes for stream purposes; never renumber existing entries.
STREAM_PURPOSES = {
    "gibbs_chain": 1,
    "gibbs_scan": 2,
    "simulate": 3,
    "random_graph": 4,
    "watts_strogatz": 5,
    "fit_iteration": 6,
}

MAX_SEED = 2**64 - 1


def _seed_sequence(seed: int, purpose: str, index: int) -> np.random.SeedSequence:
    if purpose not in STREAM_PURPOSES:
        raise ValidationError(f"Unknown random stream purpose: {purpose}")
    if not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"Seed {seed} outside the unsigned 64-bit range")
    if index < 0:
        raise ValidationError(f"Stream index must be nonnegative, got {index}")
    return np.random.SeedSequence([seed, STREAM_PURPOSES[purpose], index])


def generator(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """
    Build the generator for one substream.

    Args:
        seed: Master seed of the run
        purpose: Key from STREAM_PURPOSES
        index: Substream index (chain, realization, ...)

    Returns:
        numpy Generator backed by Philox
    """
    return np.random.Generator(np.random.Philox(_seed_sequence(seed, purpose, index)))


def integer_seed(seed: int, purpose: str, index: int = 0) -> int:
    """Derive a plain 32-bit integer seed, for libraries that take ``seed=int``."""
    state = _seed_sequence(seed, purpose, index).generate_state(1, dtype=np.uint32)
    return int(state[0])
