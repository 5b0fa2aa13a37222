"""Multi-agent environment contract: spaces, step results, time limits.

Every environment in the suite is fully cooperative and synchronous: one
call to :meth:`MultiAgentEnv.step` consumes one action per agent and
advances the world by one tick.  All randomness flows from the seed given
to :meth:`reset` through the package PRNG, so a (seed, action sequence)
pair determines the full observation/reward stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..rng import Rng, derive_seed


class ContractViolation(RuntimeError):
    """An environment API precondition was broken by the caller."""


@dataclass(frozen=True)
class ActionSpace:
    """Discrete action counts, one entry per agent."""

    per_agent_sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.per_agent_sizes or any(n < 1 for n in self.per_agent_sizes):
            raise ValueError("every agent needs at least one action")

    @property
    def n_agents(self) -> int:
        return len(self.per_agent_sizes)

    def contains(self, actions: Sequence[int]) -> bool:
        return len(actions) == self.n_agents and all(
            0 <= int(a) < n for a, n in zip(actions, self.per_agent_sizes)
        )

    def sample(self, rng: Rng) -> tuple[int, ...]:
        return tuple(rng.randrange(n) for n in self.per_agent_sizes)


@dataclass(frozen=True)
class ObservationSpace:
    """Flat observation lengths, one entry per agent."""

    per_agent_dims: tuple[int, ...]

    @property
    def n_agents(self) -> int:
        return len(self.per_agent_dims)


@dataclass
class StepResult:
    next_obs: list[np.ndarray]
    rewards: list[float]
    dones: list[bool]
    info: dict

    @property
    def team_reward(self) -> float:
        return float(sum(self.rewards))

    @property
    def done(self) -> bool:
        return all(self.dones)


@dataclass
class EpisodeClock:
    """Step counter with a hard limit; hitting the limit forces all dones true."""

    limit: int
    t: int = 0

    def reset(self) -> None:
        self.t = 0

    def tick(self) -> bool:
        """Advance one step; returns True when the limit is reached."""
        if self.t >= self.limit:
            raise ContractViolation(f"episode stepped beyond its {self.limit}-step limit")
        self.t += 1
        return self.t >= self.limit


class MultiAgentEnv:
    """Base class wiring the reset/step contract around subclass hooks.

    Subclasses implement ``_reset_state(rng)`` and ``_step_state(actions)``
    and set ``action_space`` / ``observation_space`` / ``time_limit`` in
    ``__init__``.  ``_step_state`` returns (observations, rewards,
    episode_over, info) where ``episode_over`` marks early termination
    (independent of the time limit).
    """

    action_space: ActionSpace
    observation_space: ObservationSpace
    time_limit: int
    name: str = "env"

    def __init__(self):
        self._clock = EpisodeClock(limit=self.time_limit)
        self._done = True  # must reset before stepping
        self._rng: Rng | None = None

    @property
    def n_agents(self) -> int:
        return self.action_space.n_agents

    @property
    def episode_done(self) -> bool:
        return self._done

    def reset(self, seed: int) -> list[np.ndarray]:
        self._rng = Rng(derive_seed(seed))
        self._clock = EpisodeClock(limit=self.time_limit)
        self._done = False
        obs = self._reset_state(self._rng)
        self._check_obs(obs)
        return obs

    def step(self, actions: Sequence[int]) -> StepResult:
        if self._done:
            raise ContractViolation("step() called on a finished episode; call reset()")
        if not self.action_space.contains(actions):
            raise ContractViolation(
                f"actions {tuple(actions)} outside action space {self.action_space.per_agent_sizes}"
            )
        obs, rewards, episode_over, info = self._step_state([int(a) for a in actions])
        self._check_obs(obs)
        if len(rewards) != self.n_agents:
            raise AssertionError("reward list length must equal agent count")
        hit_limit = self._clock.tick()
        self._done = bool(episode_over or hit_limit)
        info = dict(info)
        info["episode_steps"] = self._clock.t
        dones = [self._done] * self.n_agents
        return StepResult(next_obs=obs, rewards=list(map(float, rewards)), dones=dones, info=info)

    def _check_obs(self, obs: list[np.ndarray]) -> None:
        dims = self.observation_space.per_agent_dims
        if len(obs) != len(dims):
            raise AssertionError("observation list length must equal agent count")
        for i, (vec, dim) in enumerate(zip(obs, dims)):
            if vec.shape != (dim,):
                raise AssertionError(f"agent {i} observation shape {vec.shape} != ({dim},)")

    # subclass hooks ----------------------------------------------------
    def _reset_state(self, rng: Rng) -> list[np.ndarray]:
        raise NotImplementedError

    def _step_state(self, actions: list[int]) -> tuple[list[np.ndarray], list[float], bool, dict]:
        raise NotImplementedError

    def render_text(self) -> str:
        return f"<{self.name} t={self._clock.t}>"


@dataclass
class EnvStepError(RuntimeError):
    """Wraps a per-environment failure inside the vectorized runner."""

    env_index: int
    original: Exception

    def __str__(self) -> str:
        return f"env {self.env_index}: {self.original}"


@dataclass
class VecStep:
    """One synchronous tick across all environments, in env index order."""

    obs: list[list[np.ndarray]]
    rewards: list[list[float]]
    dones: list[list[bool]]
    infos: list[dict]


class VectorizedRunner:
    """Steps independent environment instances in lockstep.

    Execution is sequential in env index order, which makes aggregation
    deterministic by construction; the contract allows a parallel backend
    as long as results are merged in index order.  Finished episodes are
    reset automatically with per-episode derived seeds.
    """

    def __init__(self, envs: Sequence[MultiAgentEnv], seeds: Sequence[int]):
        if len(envs) != len(seeds):
            raise ValueError("one seed per environment required")
        self.envs = list(envs)
        self._base_seeds = list(seeds)
        self._episode_counters = [0] * len(envs)
        self.last_obs: list[list[np.ndarray]] = []

    def reset_all(self) -> list[list[np.ndarray]]:
        self.last_obs = []
        for i, env in enumerate(self.envs):
            self._episode_counters[i] = 0
            self.last_obs.append(env.reset(self._episode_seed(i)))
        return self.last_obs

    def _episode_seed(self, i: int) -> int:
        return derive_seed(self._base_seeds[i], self._episode_counters[i])

    def step(self, joint_actions: Sequence[Sequence[int]]) -> VecStep:
        obs, rewards, dones, infos = [], [], [], []
        for i, env in enumerate(self.envs):
            try:
                result = env.step(joint_actions[i])
            except Exception as exc:  # attach the env index for the caller
                raise EnvStepError(env_index=i, original=exc) from exc
            if result.done:
                self._episode_counters[i] += 1
                self.last_obs[i] = env.reset(self._episode_seed(i))
            else:
                self.last_obs[i] = result.next_obs
            obs.append(result.next_obs)
            rewards.append(result.rewards)
            dones.append(result.dones)
            infos.append(result.info)
        return VecStep(obs=obs, rewards=rewards, dones=dones, infos=infos)


def run_vectorized(
    envs: Sequence[MultiAgentEnv],
    policy: Callable[[int, list[np.ndarray]], Sequence[int]],
    steps: int,
    seeds: Sequence[int],
) -> list[list[StepResult]]:
    """Drive ``envs`` for ``steps`` ticks with ``policy(env_index, obs) -> actions``.

    Returns one StepResult stream per environment, aggregated in env index
    order regardless of how the stepping is scheduled.
    """
    runner = VectorizedRunner(envs, seeds)
    runner.reset_all()
    streams: list[list[StepResult]] = [[] for _ in envs]
    for _ in range(steps):
        actions = [policy(i, runner.last_obs[i]) for i in range(len(envs))]
        tick = runner.step(actions)
        for i in range(len(envs)):
            streams[i].append(
                StepResult(
                    next_obs=tick.obs[i],
                    rewards=tick.rewards[i],
                    dones=tick.dones[i],
                    info=tick.infos[i],
                )
            )
    return streams
