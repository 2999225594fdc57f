"""Project-wide random number generation.

Python-level code draws from numpy's PCG64 (``numpy.random.default_rng``).
Jitted loops cannot hold a ``Generator``, so they carry a three-word
Tausworthe state seeded from PCG64 and advance it in place.
"""

import numba
import numpy as np
from numpy.typing import NDArray

UINT32_MASK = 0xFFFFFFFF
TWO_POW_32 = 4294967296.0


def make_rng_state(seed: int) -> NDArray[np.int64]:
    """Derive a Tausworthe state from a PCG64 seed.

    Args:
        seed: Non-negative integer seed.

    Returns:
        Array of three int64 words, each in [16, 2**32).
    """
    return np.random.default_rng(seed).integers(16, 2**32, size=3, dtype=np.int64)


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Draw ``count`` independent child seeds from a parent seed.

    Args:
        seed: Parent seed.
        count: Number of child seeds.

    Returns:
        List of non-negative integer seeds.
    """
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**62, size=count, dtype=np.int64)]


@numba.njit(cache=True)
def tau_rand_int(state: NDArray[np.int64]) -> int:
    """Advance the state and return a uniform integer in [0, 2**32)."""
    state[0] = (((state[0] & 4294967294) << 12) & UINT32_MASK) ^ (
        (((state[0] << 13) & UINT32_MASK) ^ state[0]) >> 19
    )
    state[1] = (((state[1] & 4294967288) << 4) & UINT32_MASK) ^ (
        (((state[1] << 2) & UINT32_MASK) ^ state[1]) >> 25
    )
    state[2] = (((state[2] & 4294967280) << 17) & UINT32_MASK) ^ (
        (((state[2] << 3) & UINT32_MASK) ^ state[2]) >> 11
    )
    return state[0] ^ state[1] ^ state[2]


@numba.njit(cache=True)
def tau_rand(state: NDArray[np.int64]) -> float:
    """Advance the state and return a uniform float in [0, 1)."""
    return tau_rand_int(state) / TWO_POW_32


@numba.njit(cache=True)
def _fmix32(h: int) -> int:
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & UINT32_MASK
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & UINT32_MASK
    h ^= h >> 16
    return h


@numba.njit(cache=True)
def pair_weight(key: int, a: int, b: int) -> float:
    """Keyed pseudo-random weight in [0, 1) for the unordered pair {a, b}.

    The same pair gets the same weight regardless of argument order.
    """
    lo = min(a, b)
    hi = max(a, b)
    h = _fmix32((key ^ ((lo * 0x9E3779B1) & UINT32_MASK)) & UINT32_MASK)
    h = _fmix32(h ^ ((hi * 0x85EBCA77) & UINT32_MASK))
    return h / TWO_POW_32
