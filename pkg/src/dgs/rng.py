"""Deterministic 64-bit PRNG (SplitMix64) for reproducible random graphs.

SplitMix64 is a counter-based generator: state advances by a fixed odd
constant and each output is a bijective mix of the state.  It is trivially
portable (pure 64-bit integer arithmetic), which is what makes sampled
graphs bit-identical across platforms and worker layouts.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Stream of 64-bit words: out_i = mix64(seed + (i+1)*GOLDEN)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def next_bit(self) -> int:
        return self.next_u64() & 1


def derive_seed(seed: int, *parts: int) -> int:
    """Fold integers into a sub-stream seed, order-sensitively.

    Used to give every (n, sample-index) pair its own independent stream,
    so survey results do not depend on how samples are sharded.
    """
    x = mix64(seed ^ GOLDEN)
    for p in parts:
        x = mix64((x + GOLDEN) ^ (p & MASK64))
    return x
