"""Benchmark metrics: maximum/average returns, confidence intervals,
cross-algorithm normalization."""

from __future__ import annotations

import warnings
from collections import defaultdict

import numpy as np
from scipy import stats

from .evaluate import MetricsRecord


def t_confidence_interval(values: list[float], confidence: float = 0.95) -> float:
    """Half-width of the Student-t CI around the mean of ``values``."""
    n = len(values)
    if n < 2:
        warnings.warn("confidence interval undefined for a single seed; reporting 0")
        return 0.0
    sem = np.std(values, ddof=1) / np.sqrt(n)
    t = stats.t.ppf((1.0 + confidence) / 2.0, df=n - 1)
    return float(t * sem)


def _curves_by_point(records: list[MetricsRecord]) -> list[tuple[int, list[float]]]:
    """Across-seed return lists keyed by evaluation step, step-ordered."""
    by_point: dict[int, list[float]] = defaultdict(list)
    for rec in records:
        by_point[rec.env_steps].append(rec.mean_eval_return)
    return sorted(by_point.items())


def max_return(records: list[MetricsRecord]) -> tuple[float, float]:
    """Highest across-seed mean over evaluation points, with its 95% CI.

    Ties resolve to the earliest evaluation point.
    """
    curves = _curves_by_point(records)
    if not curves:
        raise ValueError("no evaluation records")
    best_point = max(curves, key=lambda item: np.mean(item[1]))
    best_mean = float(np.mean(best_point[1]))
    for point, values in curves:  # earliest point wins ties
        if np.mean(values) == best_mean:
            return best_mean, t_confidence_interval(values)
    raise AssertionError("unreachable")


def avg_return(records: list[MetricsRecord]) -> float:
    """Mean over all evaluation points of the across-seed means."""
    curves = _curves_by_point(records)
    if not curves:
        raise ValueError("no evaluation records")
    return float(np.mean([np.mean(values) for _, values in curves]))


def normalize_returns(returns_by_algorithm: dict[str, float]) -> dict[str, float]:
    """Min-max normalization of one task's returns into [0, 1].

    When every algorithm ties (max == min) all are mapped to 1.0.
    """
    if len(returns_by_algorithm) < 2:
        raise ValueError("normalization needs at least two algorithms")
    values = list(returns_by_algorithm.values())
    lo, hi = min(values), max(values)
    if hi == lo:
        return {k: 1.0 for k in returns_by_algorithm}
    return {k: (v - lo) / (hi - lo) for k, v in returns_by_algorithm.items()}
