"""Seeded, splittable random number generation.

All randomness in the engine flows through one named generator (numpy's
PCG64) and one published stream-splitting rule:

    derive_seed(seed, index) = splitmix64(seed XOR index)

Derived seeds are used hierarchically: a sampling call splits its seed per
chunk of draws, the planner splits per model component and per offer count,
and the calibration module splits per record. Because the split depends only
on (seed, index), results are independent of thread count and execution
order.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF

# Number of draws per chunk in chunked sampling. Part of the determinism
# contract: changing it changes sample streams.
CHUNK_SIZE = 1 << 16


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 mix function (Steele, Lea & Flood 2014)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return (x ^ (x >> 31)) & MASK64


def derive_seed(seed: int, index: int) -> int:
    """Published stream-splitting rule: hash of seed XOR sub-stream index."""
    return splitmix64((seed & MASK64) ^ (index & MASK64))


def generator(seed: int) -> np.random.Generator:
    """PCG64 generator for one (already derived) stream seed."""
    return np.random.Generator(np.random.PCG64(seed & MASK64))


def chunk_uniforms(seed: int, n: int) -> np.ndarray:
    """n uniforms in [0, 1), drawn in fixed-size chunks with per-chunk seeds.

    Chunk i draws from generator(derive_seed(seed, i)), so any prefix or
    partition of the workload reproduces the same values.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.empty(n)
    n_chunks = (n + CHUNK_SIZE - 1) // CHUNK_SIZE
    for i in range(n_chunks):
        lo = i * CHUNK_SIZE
        hi = min(lo + CHUNK_SIZE, n)
        out[lo:hi] = generator(derive_seed(seed, i)).random(hi - lo)
    return out
