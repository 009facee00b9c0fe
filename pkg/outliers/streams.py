"""
Seeded random sub-streams.

Each unit of work (a simulated dataset, an MCD start, an RSSL draw, a
benchmark replication) owns a generator derived from the master seed and
its own integer keys, so results never depend on execution order.
"""

import numpy as np

SEED_MASK = (1 << 64) - 1


def substream(seed: int, *keys: int) -> np.random.Generator:
    """
    Derive an independent generator from a seed and work-item keys.

    The keys are mixed with the seed by numpy's SeedSequence hash, so
    ``substream(7, 3)`` and ``substream(7, 4)`` are statistically independent.

    Args:
        seed: 64-bit master seed (negative values are reduced modulo 2**64)
        *keys: Non-negative integers identifying the work item

    Returns:
        numpy Generator backed by PCG64
    """
    sequence = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(sequence))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a 64-bit child seed from a seed and work-item keys."""
    sequence = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
