"""Seed derivation helpers.

All stochastic components draw from counter-based Philox generators keyed
by explicit integer tuples, so results depend only on the keys and never
on scheduling or ambient entropy.
"""

from __future__ import annotations

import numpy as np


def rng_for(*keys: int) -> np.random.Generator:
    """Generator keyed by an integer tuple; same keys, same stream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(keys))))


def derive_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit seed for sub-stream `index` of `master_seed`."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])
