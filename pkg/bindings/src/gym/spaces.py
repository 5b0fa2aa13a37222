"""The three space types the environment interface exposes."""

from __future__ import annotations

import numpy as np

from marlbench.rng import Rng


class Discrete:
    def __init__(self, n: int, rng: Rng | None = None):
        if n < 1:
            raise ValueError("Discrete space needs at least one action")
        self.n = n
        self._rng = rng or Rng(0)

    def sample(self) -> int:
        return self._rng.randrange(self.n)

    def contains(self, x) -> bool:
        return 0 <= int(x) < self.n

    def __repr__(self) -> str:
        return f"Discrete({self.n})"


class Box:
    """Flat float box; only the shape and dtype matter here."""

    def __init__(self, low: float, high: float, shape: tuple[int, ...], dtype=np.float32):
        self.low = low
        self.high = high
        self.shape = tuple(shape)
        self.dtype = dtype

    def contains(self, x) -> bool:
        arr = np.asarray(x)
        return arr.shape == self.shape

    def __repr__(self) -> str:
        return f"Box({self.shape[0]},)"


class Tuple:
    def __init__(self, spaces):
        self.spaces = tuple(spaces)

    def sample(self):
        return tuple(s.sample() for s in self.spaces)

    def __len__(self) -> int:
        return len(self.spaces)

    def __getitem__(self, i):
        return self.spaces[i]

    def __repr__(self) -> str:
        inner = ", ".join(repr(s) for s in self.spaces)
        return f"Tuple({inner})"
