"""Deterministic 64-bit PRNG used for every source of randomness in the suite.

The generator is xoshiro256** seeded through a splitmix64 expansion of a
single 64-bit seed.  Both algorithms are fixed, integer-only, and
platform-independent, so any (seed, action sequence) pair replays to the
same trace on any machine.  The stream layout is part of the package's
compatibility contract: changing it is a breaking change and must bump the
major version.

Substreams are derived with :func:`derive_seed`, which hashes the parent
seed together with integer "purpose" words (e.g. one word per environment
index, one per evaluation point) so that independent components never share
a stream.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed: int, *words: int) -> int:
    """Mix integer words into a parent seed, giving an independent substream seed."""
    state = seed & _MASK64
    _, out = _splitmix64(state)
    for w in words:
        state = (state ^ ((w & _MASK64) * 0xA24BAED4963EE407)) & _MASK64
        state, out = _splitmix64(state)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """xoshiro256** generator with the sampling helpers the suite needs."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state, word = _splitmix64(state)
            s.append(word)
        self._s = s

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

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        # Reject the tail of the 64-bit range that does not divide evenly.
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence, k: int) -> list:
        """k distinct elements, order given by a partial Fisher-Yates pass."""
        if k > len(seq):
            raise ValueError("sample size larger than population")
        pool = list(seq)
        out = []
        for i in range(k):
            j = self.randint(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
            out.append(pool[i])
        return out

    def uniform_array(self, shape: tuple[int, ...], low: float = 0.0, high: float = 1.0) -> np.ndarray:
        n = int(np.prod(shape)) if shape else 1
        vals = np.empty(n, dtype=np.float64)
        for i in range(n):
            vals[i] = self.random()
        return (low + (high - low) * vals).reshape(shape)

    def spawn(self, *words: int) -> "Rng":
        """Child generator on an independent substream."""
        s0, s1, s2, s3 = self._s
        base = derive_seed(s0 ^ _rotl(s2, 13), s1, s3)
        return Rng(derive_seed(base, *words))
