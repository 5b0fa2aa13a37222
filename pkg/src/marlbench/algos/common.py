"""Shared trainer machinery: config, schedules, replay, reward scaling.

Conventions used by every trainer:

* The scalar optimised everywhere is the team reward, the sum of the
  per-agent reward list returned by the environment.
* The global state consumed by centralised critics and the QMIX mixer is
  the concatenation of all agents' raw observations.
* Under parameter sharing, per-agent inputs are zero-padded to the longest
  observation and suffixed with a one-hot agent identity; probabilities of
  padded (invalid) actions are forced to zero by logit masking.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..envs.core import MultiAgentEnv
from ..rng import Rng

GRID_HIDDEN = (64, 128)
GRID_LR = (0.0001, 0.0003, 0.0005)
GRID_EVAL_EPSILON = (0.0, 0.05)
GRID_EPSILON_ANNEAL = (50_000, 200_000)
GRID_ENTROPY = (0.01, 0.001)
GRID_N_STEP = (5, 10)

ALGORITHMS = ("iql", "ia2c", "ippo", "maddpg", "coma", "maa2c", "mappo", "vdn", "qmix")

VALUE_BASED = ("iql", "vdn", "qmix")
ON_POLICY = ("ia2c", "ippo", "coma", "maa2c", "mappo")


@dataclass
class TrainerConfig:
    algo: str
    hidden_dim: int = 64
    lr: float = 0.0005
    gamma: float = 0.99
    reward_standardisation: bool = True
    entropy_coef: float = 0.01
    n_step: int = 5
    target_mode: str = "soft"  # "hard" (copy every target_interval) or "soft" (polyak)
    target_interval: int = 200
    target_rate: float = 0.01
    epsilon_anneal_steps: int = 50_000
    evaluation_epsilon: float = 0.05
    ppo_epochs: int = 4
    ppo_clip: float = 0.2
    parameter_sharing: bool = True
    actor_regularisation: float = 0.001
    td_lambda: float = 0.8
    n_workers: int = 8
    batch_episodes: int = 32
    warmup_transitions: int = 1000
    buffer_episodes: int = 5000
    buffer_transitions: int = 1_000_000

    def validate(self) -> None:
        """Reject values outside the tuned hyperparameter grid."""
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        checks = [
            ("hidden_dim", self.hidden_dim, GRID_HIDDEN),
            ("lr", self.lr, GRID_LR),
            ("evaluation_epsilon", self.evaluation_epsilon, GRID_EVAL_EPSILON),
            ("epsilon_anneal_steps", self.epsilon_anneal_steps, GRID_EPSILON_ANNEAL),
            ("entropy_coef", self.entropy_coef, GRID_ENTROPY),
            ("n_step", self.n_step, GRID_N_STEP),
        ]
        for name, value, allowed in checks:
            if value not in allowed:
                raise ValueError(f"{name}={value} outside tuned grid {allowed}")
        if self.target_mode not in ("hard", "soft"):
            raise ValueError("target_mode must be 'hard' or 'soft'")
        if self.ppo_epochs != 4 or self.ppo_clip != 0.2:
            raise ValueError("PPO uses 4 epochs and clip 0.2")

    def override(self, **kwargs) -> "TrainerConfig":
        return replace(self, **kwargs)

    @property
    def on_policy(self) -> bool:
        return self.algo in ON_POLICY


def epsilon(t: int, anneal_steps: int, start: float = 1.0, final: float = 0.05) -> float:
    """Linear schedule from ``start`` at t=0 to ``final`` at ``anneal_steps``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t >= anneal_steps:
        return final
    return start + (final - start) * (t / anneal_steps)


def q_targets_double(
    rewards: np.ndarray,
    dones: np.ndarray,
    next_q_online: np.ndarray,
    next_q_target: np.ndarray,
    gamma: float,
) -> np.ndarray:
    """Double Q-learning targets: the online net picks, the target net scores."""
    picked = next_q_online.argmax(axis=-1)
    bootstrap = np.take_along_axis(next_q_target, picked[..., None], axis=-1)[..., 0]
    return rewards + gamma * (1.0 - dones) * bootstrap


def nstep_returns(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    gamma: float,
    n: int,
) -> np.ndarray:
    """n-step bootstrapped returns, truncated at dones.

    ``values[t]`` is the bootstrap estimate for the state *after* step t,
    so with n=1 the target is ``r_t + gamma * (1 - done_t) * values[t]``.
    Windows shorter than n (near the end of the sequence) bootstrap at the
    last available value.
    """
    T = len(rewards)
    out = np.zeros(T, dtype=np.float64)
    for t in range(T):
        acc = 0.0
        discount = 1.0
        k = t
        while True:
            acc += discount * rewards[k]
            if dones[k]:
                break
            if k - t + 1 >= n or k + 1 >= T:
                acc += discount * gamma * values[k]
                break
            discount *= gamma
            k += 1
        out[t] = acc
    return out


def td_lambda_targets(
    rewards: np.ndarray,
    dones: np.ndarray,
    bootstrap_q: np.ndarray,
    final_q: float,
    gamma: float,
    lam: float,
) -> np.ndarray:
    """TD(lambda) targets over one sequence.

    ``bootstrap_q[t]`` estimates the value of the action actually taken at
    step t+1; ``final_q`` bootstraps past the end of the sequence.
    """
    T = len(rewards)
    out = np.zeros(T, dtype=np.float64)
    nxt = final_q
    for t in reversed(range(T)):
        cont = 1.0 - dones[t]
        one_step = bootstrap_q[t] if t + 1 < T else final_q
        out[t] = rewards[t] + gamma * cont * ((1.0 - lam) * one_step + lam * nxt)
        nxt = out[t]
    return out


class RewardStandardiser:
    """Divides team rewards by a running std of discounted returns.

    Each stream (one per parallel worker) keeps its own discounted-return
    accumulator feeding one shared variance estimate.  No mean is
    subtracted, and the divisor only engages once it exceeds 1e-6, so a
    constant zero stream passes through unchanged.
    """

    def __init__(self, gamma: float, enabled: bool = True, n_streams: int = 1):
        self.gamma = gamma
        self.enabled = enabled
        self._running = np.zeros(n_streams)
        self._count = 0
        self._mean = 0.0
        self._m2 = 0.0

    def _push(self, value: float) -> None:
        self._count += 1
        delta = value - self._mean
        self._mean += delta / self._count
        self._m2 += delta * (value - self._mean)

    def _std(self) -> float:
        return float(np.sqrt(self._m2 / self._count)) if self._count > 1 else 0.0

    def update_and_scale(self, reward: float, done: bool, stream: int = 0) -> float:
        if not self.enabled:
            return reward
        self._running[stream] = self.gamma * self._running[stream] + reward
        self._push(self._running[stream])
        if done:
            self._running[stream] = 0.0
        std = self._std()
        return reward / std if std > 1e-6 else reward

    def update_and_scale_vector(self, rewards: np.ndarray, dones: np.ndarray) -> np.ndarray:
        return np.array(
            [self.update_and_scale(float(r), bool(d), stream=i) for i, (r, d) in enumerate(zip(rewards, dones))]
        )


def pad_and_tag(obs_list: list[np.ndarray], agent_index: int, n_agents: int, pad_to: int) -> np.ndarray:
    """Zero-pad one agent's observation and append its one-hot identity."""
    obs = obs_list[agent_index]
    out = np.zeros(pad_to + n_agents, dtype=np.float64)
    out[: len(obs)] = obs
    out[pad_to + agent_index] = 1.0
    return out


def mask_invalid_logits(logits: np.ndarray, valid_count: int) -> np.ndarray:
    """Force probability mass on actions >= valid_count to exactly zero."""
    if valid_count >= logits.shape[-1]:
        return logits
    out = logits.copy()
    out[..., valid_count:] = -np.inf
    return out


def masked_probabilities(logits: np.ndarray, valid_count: int) -> np.ndarray:
    masked = mask_invalid_logits(logits, valid_count)
    shifted = masked - masked.max(axis=-1, keepdims=True)
    e = np.where(np.isneginf(shifted), 0.0, np.exp(shifted))
    return e / e.sum(axis=-1, keepdims=True)


class EpisodeBuffer:
    """Ring buffer of whole episodes with uniform episode sampling."""

    def __init__(self, max_episodes: int, max_transitions: int, time_limit: int):
        self.capacity = min(max_episodes, max(1, max_transitions // time_limit))
        self._episodes: list[dict] = []
        self._next = 0
        self.total_transitions = 0

    def __len__(self) -> int:
        return len(self._episodes)

    def push(self, episode: dict) -> None:
        if len(self._episodes) < self.capacity:
            self._episodes.append(episode)
        else:
            self.total_transitions -= len(self._episodes[self._next]["rewards"])
            self._episodes[self._next] = episode
            self._next = (self._next + 1) % self.capacity
        self.total_transitions += len(episode["rewards"])

    def sample(self, batch: int, rng: Rng) -> list[dict]:
        return [self._episodes[rng.randrange(len(self._episodes))] for _ in range(batch)]


@dataclass
class EnvInfo:
    """The task facts a trainer needs, derived once from an env instance."""

    n_agents: int
    obs_dims: tuple[int, ...]
    n_actions: tuple[int, ...]
    time_limit: int

    @property
    def max_obs_dim(self) -> int:
        return max(self.obs_dims)

    @property
    def max_actions(self) -> int:
        return max(self.n_actions)

    @property
    def state_dim(self) -> int:
        return sum(self.obs_dims)

    @classmethod
    def of(cls, env: MultiAgentEnv) -> "EnvInfo":
        return cls(
            n_agents=env.n_agents,
            obs_dims=tuple(env.observation_space.per_agent_dims),
            n_actions=tuple(env.action_space.per_agent_sizes),
            time_limit=env.time_limit,
        )


def flatten_state(obs_list: list[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.asarray(o, dtype=np.float64) for o in obs_list])
