"""Name registry and the bound environment wrapper.

A bound environment owns exactly one native engine instance and delegates
to it; nothing but the handle and cached spaces lives on this side.
Observations are returned as float32 arrays (bit-exact casts of the native
float64 values), rewards and dones as plain lists, matching the classic
4-tuple step interface.
"""

from __future__ import annotations

import numpy as np

from marlbench.envs import make as native_make
from marlbench.rng import Rng, derive_seed

from .spaces import Box, Discrete, Tuple

registry: dict[str, "EnvSpec"] = {}


class EnvSpec:
    def __init__(self, name: str, factory):
        self.name = name
        self.factory = factory


def register(name: str, factory) -> None:
    registry[name] = EnvSpec(name, factory)


def make(name: str) -> "BoundEnv":
    if name in registry:
        return registry[name].factory()
    # grammar names are constructible without explicit registration
    try:
        return BoundEnv(native_make(name))
    except Exception as exc:
        raise KeyError(f"no registered environment named {name!r}") from exc


class BoundEnv:
    """Gym-style face over one native environment instance."""

    def __init__(self, env, seed: int = 0):
        self._env = env
        self._base_seed = seed
        self._episode = 0
        self._sample_rng = Rng(derive_seed(seed, 0x5A17))
        self.n_agents = env.n_agents
        self.action_space = Tuple(
            [Discrete(n, self._sample_rng) for n in env.action_space.per_agent_sizes]
        )
        self.observation_space = Tuple(
            [Box(-np.inf, np.inf, (d,)) for d in env.observation_space.per_agent_dims]
        )

    # classic API -------------------------------------------------------

    def seed(self, seed: int) -> list[int]:
        self._base_seed = seed
        self._episode = 0
        self._sample_rng = Rng(derive_seed(seed, 0x5A17))
        return [seed]

    def reset(self):
        obs = self._env.reset(derive_seed(self._base_seed, self._episode))
        self._episode += 1
        return tuple(np.asarray(o, dtype=np.float32) for o in obs)

    def step(self, actions):
        result = self._env.step(list(actions))
        next_obs = tuple(np.asarray(o, dtype=np.float32) for o in result.next_obs)
        return next_obs, list(result.rewards), list(result.dones), dict(result.info)

    def render(self, mode: str = "human"):
        text = self._env.render_text()
        if mode == "human":
            print(text)
            return None
        return text

    def close(self) -> None:
        pass

    @property
    def unwrapped(self):
        return self._env
