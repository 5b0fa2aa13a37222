"""Training drivers wiring environments, trainers, and the eval schedule.

Off-policy trainers step a single environment and take one gradient step
per environment step once a 1000-transition warm-up has filled the replay
buffer.  On-policy trainers run 8 synchronous workers and update from each
fresh rollout of length n-step.  Both are fully deterministic given the
run seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algos import EnvInfo, EpisodeBuffer, RewardStandardiser, TrainerConfig, build_trainer, pad_obs_batch
from ..envs import make
from ..envs.core import VectorizedRunner
from ..rng import Rng, derive_seed
from .evaluate import EVAL_EPISODES, EvalSchedule, MetricsRecord, evaluate


@dataclass
class TrainResult:
    records: list[MetricsRecord]
    trainer: object
    env_steps: int


def train_run(
    task: str,
    cfg: TrainerConfig,
    seed: int,
    total_steps: int,
    eval_episodes: int = EVAL_EPISODES,
    schedule: EvalSchedule | None = None,
    stop_at_return: float | None = None,
    time_limit: int | None = None,
    min_steps_before_stop: int = 0,
) -> TrainResult:
    """Train one (task, algorithm, seed) run and record scheduled evaluations.

    ``stop_at_return`` ends the run early once an evaluation at or beyond
    ``min_steps_before_stop`` reaches the threshold (the floor guards
    against declaring victory on a lucky random initialisation); recorded
    points stay on schedule either way.
    """
    cfg.validate()
    if schedule is None:
        schedule = EvalSchedule.for_task(task, total_steps)
    stop = (stop_at_return, min_steps_before_stop)
    if cfg.on_policy:
        return _train_on_policy(task, cfg, seed, total_steps, eval_episodes, schedule, stop, time_limit)
    return _train_off_policy(task, cfg, seed, total_steps, eval_episodes, schedule, stop, time_limit)


def _eval_record(trainer, task, cfg, seed, point, eval_episodes, time_limit) -> MetricsRecord:
    mean = evaluate(trainer, task, eval_episodes, seed=derive_seed(seed, 0xEE, point), time_limit=time_limit)
    return MetricsRecord(
        task=task,
        algorithm=cfg.algo,
        seed=seed,
        env_steps=point,
        mean_eval_return=mean,
        episodes=eval_episodes,
        sharing=cfg.parameter_sharing,
    )


def _stop_now(stop, record) -> bool:
    threshold, floor = stop
    return threshold is not None and record.env_steps >= floor and record.mean_eval_return >= threshold


def _train_off_policy(task, cfg, seed, total_steps, eval_episodes, schedule, stop, time_limit):
    env = make(task, time_limit=time_limit)
    info = EnvInfo.of(env)
    trainer = build_trainer(info, cfg, Rng(derive_seed(seed, 1)))
    explore_rng = Rng(derive_seed(seed, 2))
    update_rng = Rng(derive_seed(seed, 3))
    standardiser = RewardStandardiser(cfg.gamma, cfg.reward_standardisation)
    buffer = EpisodeBuffer(cfg.buffer_episodes, cfg.buffer_transitions, info.time_limit)

    points = schedule.points()
    records: list[MetricsRecord] = []
    next_point = 0

    episode_count = 0
    obs = env.reset(derive_seed(seed, 4, episode_count))
    ep_obs = [pad_obs_batch([obs], info)[0]]
    ep_actions: list[list[int]] = []
    ep_rewards: list[float] = []
    ep_dones: list[float] = []

    for step in range(total_steps + 1):
        while next_point < len(points) and points[next_point] <= step:
            records.append(_eval_record(trainer, task, cfg, seed, points[next_point], eval_episodes, time_limit))
            next_point += 1
            if _stop_now(stop, records[-1]):
                return TrainResult(records, trainer, step)
        if step == total_steps:
            break

        actions = trainer.act_single(obs, explore=True, rng=explore_rng, step=step)
        result = env.step(actions)
        scaled = standardiser.update_and_scale(result.team_reward, result.done)
        ep_actions.append(actions)
        ep_rewards.append(scaled)
        ep_dones.append(1.0 if result.done else 0.0)
        ep_obs.append(pad_obs_batch([result.next_obs], info)[0])

        if result.done:
            buffer.push(
                {
                    "obs": np.stack(ep_obs),
                    "actions": np.array(ep_actions, dtype=np.int64),
                    "rewards": np.array(ep_rewards),
                    "dones": np.array(ep_dones),
                }
            )
            episode_count += 1
            obs = env.reset(derive_seed(seed, 4, episode_count))
            ep_obs = [pad_obs_batch([obs], info)[0]]
            ep_actions, ep_rewards, ep_dones = [], [], []
        else:
            obs = result.next_obs

        if buffer.total_transitions >= cfg.warmup_transitions and len(buffer) > 0:
            trainer.update(buffer.sample(cfg.batch_episodes, update_rng), update_rng)

    return TrainResult(records, trainer, total_steps)


def _train_on_policy(task, cfg, seed, total_steps, eval_episodes, schedule, stop, time_limit):
    workers = cfg.n_workers
    envs = [make(task, time_limit=time_limit) for _ in range(workers)]
    info = EnvInfo.of(envs[0])
    trainer = build_trainer(info, cfg, Rng(derive_seed(seed, 1)))
    explore_rng = Rng(derive_seed(seed, 2))
    standardiser = RewardStandardiser(cfg.gamma, cfg.reward_standardisation, n_streams=workers)

    runner = VectorizedRunner(envs, seeds=[derive_seed(seed, 4, w) for w in range(workers)])
    runner.reset_all()

    points = schedule.points()
    records: list[MetricsRecord] = []
    next_point = 0
    steps_done = 0
    rollout_len = cfg.n_step
    needs_bootstrap_actions = trainer.kind == "rollout" and hasattr(trainer, "_critic_inputs")

    while True:
        while next_point < len(points) and points[next_point] <= steps_done:
            records.append(_eval_record(trainer, task, cfg, seed, points[next_point], eval_episodes, time_limit))
            next_point += 1
            if _stop_now(stop, records[-1]):
                return TrainResult(records, trainer, steps_done)
        if steps_done >= total_steps:
            break

        obs_seq = [pad_obs_batch(runner.last_obs, info)]
        actions_seq, rewards_seq, dones_seq = [], [], []
        for _ in range(rollout_len):
            acts = trainer.act_batch(obs_seq[-1], explore=True, rng=explore_rng, step=steps_done)
            tick = runner.step([list(map(int, acts[w])) for w in range(workers)])
            team = np.array([sum(tick.rewards[w]) for w in range(workers)])
            done = np.array([1.0 if all(tick.dones[w]) else 0.0 for w in range(workers)])
            actions_seq.append(acts)
            rewards_seq.append(standardiser.update_and_scale_vector(team, done))
            dones_seq.append(done)
            obs_seq.append(pad_obs_batch(runner.last_obs, info))

        batch = {
            "obs": np.stack(obs_seq),  # [T+1, W, N, D]
            "actions": np.stack(actions_seq).astype(np.int64),
            "rewards": np.stack(rewards_seq),
            "dones": np.stack(dones_seq),
        }
        if needs_bootstrap_actions:
            batch["bootstrap_actions"] = trainer.act_batch(
                obs_seq[-1], explore=True, rng=explore_rng, step=steps_done
            ).astype(np.int64)
        trainer.update(batch)
        steps_done += rollout_len * workers

    return TrainResult(records, trainer, steps_done)
