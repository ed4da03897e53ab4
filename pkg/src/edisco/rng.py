"""Portable, counter-based random streams.

Every stream is a Philox4x64 generator keyed by a 64-bit value, and
uniforms are built from the raw 64-bit output words, so identical seeds
give identical numbers on every platform.  Independent substreams (one per
gene, say) are keyed by mixing the master seed with the substream index
through the SplitMix64 finaliser.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finaliser: a bijective 64-bit avalanche mixer."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, index: int | None = None) -> int:
    """Key for the master stream (``index=None``) or for substream ``index``."""
    s = int(seed) & _MASK64
    if index is None:
        return mix64(s)
    return mix64((s + (int(index) + 1) * _GOLDEN_GAMMA) & _MASK64)


def stream(seed: int, index: int | None = None) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=stream_key(seed, index)))


def uniforms(gen: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniforms strictly inside (0, 1): ``(top 53 bits + 0.5) / 2**53``."""
    raw = gen.bit_generator.random_raw(n)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * (2.0**-53)


def standard_normals(gen: np.random.Generator, n: int) -> np.ndarray:
    """Standard normal draws by the inverse CDF of :func:`uniforms`."""
    return ndtri(uniforms(gen, n))


def random_permutations(gen: np.random.Generator, n_perm: int, size: int) -> np.ndarray:
    """``n_perm`` independent uniform permutations of ``range(size)``, one per row.

    Fisher-Yates, vectorised across rows: position ``i`` (from the top down)
    swaps with ``floor(u * (i + 1))``.  Identity permutations are kept.
    """
    perms = np.tile(np.arange(size), (n_perm, 1))
    rows = np.arange(n_perm)
    for i in range(size - 1, 0, -1):
        j = (uniforms(gen, n_perm) * (i + 1)).astype(np.intp)
        tmp = perms[rows, j]
        perms[rows, j] = perms[:, i]
        perms[:, i] = tmp
    return perms
