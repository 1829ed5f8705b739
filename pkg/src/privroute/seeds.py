"""Seed-stream derivation.

Every random draw in the project flows through a ``numpy`` ``Generator``
(PCG64) built from a ``SeedSequence``. Substreams are keyed, not split
sequentially, so trial ``t`` gets the same stream no matter how many trials
run or in what order. Gaussian variates use numpy's ziggurat sampler.
"""

from __future__ import annotations

import numpy as np

Seed = int | np.random.SeedSequence

# spawn-key tags for the experiment harness substreams
PAIR_SAMPLING_STREAM = 0
TRIAL_STREAM = 1
SPARSITY_STREAM = 2


def substream(master: Seed, *key: int) -> np.random.SeedSequence:
    """Independent, order-invariant child stream of ``master``."""
    if isinstance(master, np.random.SeedSequence):
        entropy = master.entropy
        base_key = tuple(master.spawn_key)
    else:
        entropy = master
        base_key = ()
    return np.random.SeedSequence(entropy=entropy, spawn_key=base_key + key)


def generator(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed))
