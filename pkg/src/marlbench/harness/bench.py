"""Simulation throughput benchmark: 10,000 random-action steps per task."""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..envs import make
from ..rng import Rng, derive_seed

BENCH_STEPS = 10_000


@dataclass
class ThroughputResult:
    task: str
    n_agents: int
    total_seconds: float
    ms_per_step: float


def bench_throughput(task: str, steps: int = BENCH_STEPS, seed: int = 0) -> ThroughputResult:
    """Wall-clock time to simulate ``steps`` random-action steps.

    Episodes reset automatically; nothing is rendered.  Values are
    measurements for reporting, not assertions.
    """
    env = make(task)
    rng = Rng(derive_seed(seed, 0xBE7C))
    episode = 0
    env.reset(derive_seed(seed, episode))
    start = time.perf_counter()
    for _ in range(steps):
        result = env.step(env.action_space.sample(rng))
        if result.done:
            episode += 1
            env.reset(derive_seed(seed, episode))
    total = time.perf_counter() - start
    return ThroughputResult(
        task=task,
        n_agents=env.n_agents,
        total_seconds=total,
        ms_per_step=1000.0 * total / steps,
    )


def format_throughput_table(results: list[ThroughputResult]) -> str:
    """The benchmark report layout: task, agents, total s, ms per step."""
    lines = [f"{'Task':<32}{'Agents':>7}{'Total time [s]':>16}{'Time per step [ms]':>20}"]
    for r in results:
        lines.append(f"{r.task:<32}{r.n_agents:>7}{r.total_seconds:>16.3f}{r.ms_per_step:>20.3f}")
    return "\n".join(lines)
