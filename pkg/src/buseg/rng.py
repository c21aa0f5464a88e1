"""Deterministic random stream with a pinned bit-level contract.

The stream is xoshiro256** seeded through SplitMix64. Derived draws are
defined exactly, so that any faithful reimplementation reproduces the
same synthetic datasets byte for byte:

* ``uniform()`` takes the top 53 bits of the next 64-bit word and
  scales by 2**-53, giving a double in [0, 1).
* ``normal()`` consumes exactly two successive uniforms u1, u2 and
  returns sqrt(-2*ln(u1)) * cos(2*pi*u2) (Box-Muller, cosine branch
  only, no caching). A u1 of exactly 0 is replaced by 2**-53.
* ``uniform_int(lo, hi)`` consumes one uniform u and returns
  lo + floor(u * (hi - lo + 1)), inclusive of both ends.

Consumers that promise byte-identical output (the synthetic dataset
generator, benchmark mask drawing) document the exact order in which
they take draws from one stream.
"""

from __future__ import annotations

import math

__all__ = ["SplitMix64", "Xoshiro256StarStar"]

_MASK64 = (1 << 64) - 1
_TWO_NEG_53 = 2.0**-53


class SplitMix64:
    """64-bit SplitMix generator; used only to seed the main stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with the 4-word state filled from SplitMix64(seed)."""

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self._s = [sm.next_u64() for _ in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Double in [0, 1) from the top 53 bits of the next word."""
        return (self.next_u64() >> 11) * _TWO_NEG_53

    def normal(self) -> float:
        """Standard normal via Box-Muller; consumes exactly two uniforms."""
        u1 = self.uniform()
        u2 = self.uniform()
        if u1 == 0.0:
            u1 = _TWO_NEG_53
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def uniform_int(self, lo: int, hi: int) -> int:
        """Integer uniform on [lo, hi] inclusive; consumes one uniform."""
        if hi < lo:
            raise ValueError("empty integer range")
        return lo + int(self.uniform() * (hi - lo + 1))
