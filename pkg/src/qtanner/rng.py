"""Seedable 64-bit generator used for every random choice in the package.

The update function is splitmix64:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z ^ (z >> 31)

Any implementation of this recurrence reproduces the exact streams used by
the code sampler, the error models and the sweep driver, so results are
portable across platforms and language ports.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit stream from a single integer seed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, so the stream is unbiased."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def bits(self, count: int) -> int:
        """Integer with `count` uniform random bits."""
        out = 0
        filled = 0
        while filled < count:
            take = min(64, count - filled)
            out |= (self.next_u64() >> (64 - take)) << filled
            filled += take
        return out

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), sorted (partial Fisher-Yates)."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} of {n} indices")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])
