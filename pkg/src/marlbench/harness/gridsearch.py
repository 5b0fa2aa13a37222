"""Hyperparameter grid search: 3 seeds per candidate, best max-return wins."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algos import TrainerConfig
from .evaluate import EvalSchedule
from .metrics import max_return
from .train import train_run


@dataclass
class GridSearchResult:
    best: TrainerConfig
    best_score: float
    scores: list[tuple[TrainerConfig, float]]


def grid_search(
    task: str,
    grid: list[TrainerConfig],
    total_steps: int,
    seeds: tuple[int, ...] = (0, 1, 2),
    eval_episodes: int = 20,
    time_limit: int | None = None,
    runner=train_run,
) -> GridSearchResult:
    """Train every candidate config on ``seeds`` and pick the one with the
    highest mean max-return; ties resolve to grid order.

    ``runner`` must match the train_run signature and exists so tests can
    substitute a synthetic benchmark.
    """
    if not grid:
        raise ValueError("grid search needs at least one candidate config")
    scores: list[tuple[TrainerConfig, float]] = []
    for cfg in grid:
        per_seed = []
        for seed in seeds:
            result = runner(
                task,
                cfg,
                seed=seed,
                total_steps=total_steps,
                eval_episodes=eval_episodes,
                time_limit=time_limit,
            )
            value, _ = max_return(result.records)
            per_seed.append(value)
        scores.append((cfg, float(np.mean(per_seed))))
    best_idx = 0
    for i, (_, score) in enumerate(scores):
        if score > scores[best_idx][1]:
            best_idx = i
    return GridSearchResult(best=scores[best_idx][0], best_score=scores[best_idx][1], scores=scores)
