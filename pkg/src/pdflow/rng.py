"""Self-contained deterministic Gaussian source for reproducible instances.

The generator is SplitMix64 (Steele, Lea, Flood 2014): output i of a stream
seeded with ``seed`` is ``mix64(seed + (i+1) * GOLDEN)`` with all arithmetic
mod 2**64, which makes the sequential stream trivially vectorizable with a
counter.  Gaussians come from the Box-Muller transform applied to
consecutive output pairs (z0, z1):

    u1 = ((z0 >> 11) + 1) * 2**-53        # in (0, 1], log-safe
    u2 = (z1 >> 11) * 2**-53              # in [0, 1)
    g0 = sqrt(-2 ln u1) cos(2 pi u2)
    g1 = sqrt(-2 ln u1) sin(2 pi u2)

Draw discipline, so sequences are reproducible across platforms and calls:
each ``normals(count)`` call consumes ceil(count/2) whole pairs from the
raw stream and, for odd ``count``, discards the sine half of the final
pair.  The raw counter therefore advances by 2*ceil(count/2) per call.
"""

from __future__ import annotations

import math

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO53 = float(2.0**-53)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _S30)
    z = z * _MIX1
    z = z ^ (z >> _S27)
    z = z * _MIX2
    z = z ^ (z >> _S31)
    return z


class GaussianStream:
    """Stateful stream of standard normal draws with a documented order."""

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
        self.seed = int(seed) % 2**64
        self._consumed = 0  # raw SplitMix64 outputs used so far

    def raw(self, count: int) -> np.ndarray:
        """Next `count` raw 64-bit outputs as uint64."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        idx = np.arange(self._consumed + 1, self._consumed + count + 1, dtype=np.uint64)
        self._consumed += count
        state = np.uint64(self.seed) + idx * GOLDEN
        return _mix64(state)

    def uniforms(self, count: int) -> np.ndarray:
        """Next `count` uniforms in (0, 1]."""
        z = self.raw(count)
        return (((z >> _S11) + _ONE)).astype(np.float64) * _TWO53

    def normals(self, count: int) -> np.ndarray:
        """Next `count` standard normal draws (Box-Muller on whole pairs)."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0:
            return np.empty(0)
        npairs = (count + 1) // 2
        z = self.raw(2 * npairs)
        u1 = ((z[0::2] >> _S11) + _ONE).astype(np.float64) * _TWO53
        u2 = (z[1::2] >> _S11).astype(np.float64) * _TWO53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = (2.0 * math.pi) * u2
        out = np.empty(2 * npairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]
