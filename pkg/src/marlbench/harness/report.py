"""Result files: CSV writers and the figure-rendering report path.

Results CSV schema:  task,algorithm,seed,sharing,env_steps,mean_return
Summary CSV schema:  task,algorithm,max_return,ci,avg_return
"""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .evaluate import MetricsRecord
from .metrics import avg_return, max_return, normalize_returns, t_confidence_interval

RESULTS_HEADER = ["task", "algorithm", "seed", "sharing", "env_steps", "mean_return"]
SUMMARY_HEADER = ["task", "algorithm", "max_return", "ci", "avg_return"]


def write_results_csv(path: str | Path, records: list[MetricsRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow(
                [r.task, r.algorithm, r.seed, "on" if r.sharing else "off", r.env_steps, f"{r.mean_eval_return:.6f}"]
            )
    return path


def read_results_csv(path: str | Path) -> list[MetricsRecord]:
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                MetricsRecord(
                    task=row["task"],
                    algorithm=row["algorithm"],
                    seed=int(row["seed"]),
                    env_steps=int(row["env_steps"]),
                    mean_eval_return=float(row["mean_return"]),
                    sharing=row["sharing"] == "on",
                )
            )
    return records


def write_summary_csv(path: str | Path, records: list[MetricsRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    groups = _group(records)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for (task, algo), recs in sorted(groups.items()):
            best, ci = max_return(recs)
            writer.writerow([task, algo, f"{best:.4f}", f"{ci:.4f}", f"{avg_return(recs):.4f}"])
    return path


def _group(records: list[MetricsRecord]) -> dict[tuple[str, str], list[MetricsRecord]]:
    groups: dict[tuple[str, str], list[MetricsRecord]] = defaultdict(list)
    for r in records:
        groups[(r.task, r.algorithm)].append(r)
    return groups


def render_training_curves(records: list[MetricsRecord], out_dir: str | Path) -> list[Path]:
    """One PNG per task: across-seed mean return vs env steps, CI-banded."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_task: dict[str, dict[str, list[MetricsRecord]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        by_task[r.task][r.algorithm].append(r)

    written = []
    for task, algos in sorted(by_task.items()):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for algo, recs in sorted(algos.items()):
            by_point: dict[int, list[float]] = defaultdict(list)
            for r in recs:
                by_point[r.env_steps].append(r.mean_eval_return)
            steps = sorted(by_point)
            means = np.array([np.mean(by_point[s]) for s in steps])
            cis = np.array([t_confidence_interval(by_point[s]) if len(by_point[s]) > 1 else 0.0 for s in steps])
            ax.plot(steps, means, label=algo.upper(), linewidth=1.5)
            if cis.any():
                ax.fill_between(steps, means - cis, means + cis, alpha=0.2)
        ax.set_xlabel("environment steps")
        ax.set_ylabel("mean evaluation return")
        ax.set_title(task)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / f"curve_{_safe(task)}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def render_normalized_bars(records: list[MetricsRecord], out_path: str | Path) -> Path | None:
    """Bar chart of per-task min-max-normalized maximum returns."""
    groups = _group(records)
    by_task: dict[str, dict[str, float]] = defaultdict(dict)
    for (task, algo), recs in groups.items():
        by_task[task][algo] = max_return(recs)[0]
    tasks = [t for t, algos in sorted(by_task.items()) if len(algos) >= 2]
    if not tasks:
        return None

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    algos = sorted({a for t in tasks for a in by_task[t]})
    width = 0.8 / len(algos)
    fig, ax = plt.subplots(figsize=(max(6.4, 1.2 * len(tasks)), 4.0))
    x = np.arange(len(tasks))
    for j, algo in enumerate(algos):
        normed = []
        for t in tasks:
            norm = normalize_returns(by_task[t])
            normed.append(norm.get(algo, np.nan))
        ax.bar(x + j * width, normed, width, label=algo.upper())
    ax.set_xticks(x + 0.4 - width / 2)
    ax.set_xticklabels(tasks, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("normalized max return")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
