"""Seedable 64-bit generator for the verification suites.

SplitMix64: state advances by the golden-ratio increment and each output
is the finalizer mix of the new state. Trial k of a suite seeded with s
draws from an independent stream with initial state mix64(s ^ (k+1) * GAMMA),
so serial and parallel runs see identical values.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        return mix64(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (2.0 ** -53)
        return lo + (hi - lo) * u

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n); desk-scale n, modulo bias negligible."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n


def stream(seed: int, index: int) -> SplitMix64:
    """Independent generator for trial `index` of a run seeded with `seed`."""
    return SplitMix64(mix64((seed ^ ((index + 1) * GAMMA)) & MASK64))
