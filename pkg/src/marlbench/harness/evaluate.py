"""Evaluation protocol: schedules, policy evaluation, metrics records."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..envs import make
from ..envs.tasks import task_family
from ..rng import Rng, derive_seed

EVAL_EPISODES = 100


@dataclass(frozen=True)
class EvalSchedule:
    """Evaluation points at constant step intervals, endpoints included.

    Matrix games use 100 evaluation points, all other families 41.
    """

    total_steps: int
    n_points: int

    @property
    def interval(self) -> float:
        return self.total_steps / (self.n_points - 1)

    def points(self) -> list[int]:
        raw = [round(i * self.interval) for i in range(self.n_points)]
        raw[0], raw[-1] = 0, self.total_steps
        return sorted(set(raw))

    @classmethod
    def for_task(cls, task: str, total_steps: int) -> "EvalSchedule":
        n = 100 if task_family(task) == "matrix" else 41
        return cls(total_steps=total_steps, n_points=n)


@dataclass
class MetricsRecord:
    """One evaluation point of one training run."""

    task: str
    algorithm: str
    seed: int
    env_steps: int
    mean_eval_return: float
    episodes: int = EVAL_EPISODES
    sharing: bool = True


def evaluate(
    trainer,
    task: str,
    episodes: int = EVAL_EPISODES,
    seed: int = 0,
    time_limit: int | None = None,
) -> float:
    """Mean undiscounted team return over evaluation episodes.

    The policy is read-only: value-based trainers act epsilon-greedy with
    their configured evaluation epsilon, stochastic policies are sampled.
    A dedicated PRNG stream drives both the environment seeds and any
    policy sampling.
    """
    env = make(task, time_limit=time_limit)
    rng = Rng(derive_seed(seed, 0xE7A1))
    total = 0.0
    for ep in range(episodes):
        obs = env.reset(derive_seed(seed, 0x0E9, ep))
        ep_return = 0.0
        done = False
        while not done:
            actions = trainer.act_single(obs, explore=False, rng=rng)
            result = env.step(actions)
            ep_return += result.team_reward
            obs = result.next_obs
            done = result.done
        total += ep_return
    return total / episodes


class RandomPolicy:
    """Uniform random joint policy; useful as an evaluation baseline."""

    def __init__(self, n_actions: tuple[int, ...]):
        self.n_actions = n_actions

    def act_single(self, obs_list, explore: bool, rng: Rng, step: int = 0) -> list[int]:
        return [rng.randrange(n) for n in self.n_actions]
