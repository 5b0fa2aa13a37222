"""Scratch sweep: find a desk-scale VDN config for the coop LBF task."""
import sys
import time

from marlbench.algos import TrainerConfig
from marlbench.harness.evaluate import EvalSchedule
from marlbench.harness.train import train_run

variants = {
    "lr5e4_std": dict(lr=0.0005, reward_standardisation=True, batch_episodes=8),
    "lr5e4_raw": dict(lr=0.0005, reward_standardisation=False, batch_episodes=8),
    "lr3e4_raw_b4": dict(lr=0.0003, reward_standardisation=False, batch_episodes=4),
}

name = sys.argv[1]
kw = variants[name]
cfg = TrainerConfig(
    algo="vdn", hidden_dim=64, evaluation_epsilon=0.0,
    epsilon_anneal_steps=50_000, target_mode="soft", **kw,
)
schedule = EvalSchedule(total_steps=240_000, n_points=25)
t0 = time.perf_counter()
res = train_run(
    "Foraging-8x8-2p-2f-coop-v1", cfg, seed=0, total_steps=240_000,
    eval_episodes=40, schedule=schedule, stop_at_return=0.85, min_steps_before_stop=5_000,
)
dt = time.perf_counter() - t0
curve = [(r.env_steps, round(r.mean_eval_return, 3)) for r in res.records]
print(f"{name}: stop {res.env_steps} ({dt/60:.1f} min)")
print(curve, flush=True)
