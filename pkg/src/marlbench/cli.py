"""Command-line entry point.

Subcommands: train, evaluate, bench, grid-search, list-tasks, report.
Exit codes: 0 success, 2 configuration error, 3 runtime error.  Results
land in --results-dir, the MARLBENCH_RESULTS_DIR environment variable, or
./results, in that order of precedence.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import os
import sys
from pathlib import Path

import yaml

from .algos import ALGORITHMS, TrainerConfig, preset
from .envs import make, parse_task_name, registered_tasks
from .envs.tasks import TaskParseError, task_family
from .harness import (
    EvalSchedule,
    RandomPolicy,
    bench_throughput,
    evaluate,
    format_throughput_table,
    grid_search,
    max_return,
    read_results_csv,
    render_normalized_bars,
    render_training_curves,
    train_run,
    write_results_csv,
    write_summary_csv,
)
from .harness.evaluate import MetricsRecord

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# desk-scale defaults preserving the 10x on-/off-policy sample ratio
DEFAULT_STEPS_OFF_POLICY = 50_000
DEFAULT_STEPS_ON_POLICY = 500_000

_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(TrainerConfig)}


class ConfigError(Exception):
    pass


def _results_dir(args) -> Path:
    if args.results_dir:
        return Path(args.results_dir)
    return Path(os.environ.get("MARLBENCH_RESULTS_DIR", "results"))


def _coerce(name: str, raw: str):
    if name not in _CONFIG_FIELDS:
        raise ConfigError(f"unknown config key {name!r}")
    current = getattr(TrainerConfig(algo="iql"), name)
    if isinstance(current, bool):
        if raw.lower() in ("true", "on", "1", "yes"):
            return True
        if raw.lower() in ("false", "off", "0", "no"):
            return False
        raise ConfigError(f"{name} expects a boolean, got {raw!r}")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def _load_config(task: str, algo: str, sharing: bool, config_file: str | None, overrides: list[str]) -> TrainerConfig:
    if algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    cfg = preset(algo, task_family(task), sharing)
    updates: dict = {}
    if config_file:
        try:
            doc = yaml.safe_load(Path(config_file).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config file {config_file}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config file must be a flat mapping of keys to values")
        for key, value in doc.items():
            if key not in _CONFIG_FIELDS:
                raise ConfigError(f"unknown config key {key!r} in {config_file}")
            updates[key] = value
    for item in overrides:  # flags override the file
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        updates[key] = _coerce(key.strip(), raw.strip())
    if updates:
        cfg = cfg.override(**updates)
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _cmd_list_tasks(args) -> int:
    for name in registered_tasks():
        print(name)
    return EXIT_OK


def _cmd_train(args) -> int:
    parse_task_name(args.task)
    cfg = _load_config(args.task, args.algo, args.sharing == "on", args.config, args.set or [])
    total = args.steps or (DEFAULT_STEPS_ON_POLICY if cfg.on_policy else DEFAULT_STEPS_OFF_POLICY)
    records: list[MetricsRecord] = []
    for seed in args.seeds:
        result = train_run(
            args.task,
            cfg,
            seed=seed,
            total_steps=total,
            eval_episodes=args.eval_episodes,
            time_limit=args.time_limit,
        )
        records.extend(result.records)
        best, _ = max_return(result.records)
        print(f"seed {seed}: {len(result.records)} evaluations, max return {best:.3f}")
    out = _results_dir(args) / f"results_{args.task}_{args.algo}.csv"
    write_results_csv(out, records)
    print(f"results written to {out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    parse_task_name(args.task)
    env = make(args.task)
    policy = RandomPolicy(env.action_space.per_agent_sizes)
    mean = evaluate(policy, args.task, episodes=args.eval_episodes, seed=args.seeds[0])
    print(f"random policy on {args.task}: mean return {mean:.3f} over {args.eval_episodes} episodes")
    return EXIT_OK


def _cmd_bench(args) -> int:
    tasks = [args.task] if args.task else list(registered_tasks())
    results = []
    for task in tasks:
        results.append(bench_throughput(task))
    print(format_throughput_table(results))
    out = _results_dir(args) / "throughput.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        fh.write("task,n_agents,total_seconds,ms_per_step\n")
        for r in results:
            fh.write(f"{r.task},{r.n_agents},{r.total_seconds:.4f},{r.ms_per_step:.4f}\n")
    print(f"throughput table written to {out}")
    return EXIT_OK


def _cmd_grid_search(args) -> int:
    parse_task_name(args.task)
    base = _load_config(args.task, args.algo, args.sharing == "on", args.config, args.set or [])
    axes = {
        "hidden_dim": [64, 128],
        "lr": [0.0001, 0.0003, 0.0005],
        "reward_standardisation": [True, False],
    }
    keys = [k for k in axes if k in (args.axes or ["lr"])] or ["lr"]
    combos = list(itertools.product(*[axes[k] for k in keys]))
    grid = [base.override(**dict(zip(keys, combo))) for combo in combos]
    total = args.steps or (DEFAULT_STEPS_ON_POLICY if base.on_policy else DEFAULT_STEPS_OFF_POLICY)
    result = grid_search(args.task, grid, total_steps=total, seeds=tuple(args.seeds), time_limit=args.time_limit)
    for cfg, score in result.scores:
        marks = {k: getattr(cfg, k) for k in keys}
        print(f"{marks} -> mean max return {score:.3f}")
    best = {k: getattr(result.best, k) for k in keys}
    print(f"best: {best} (score {result.best_score:.3f})")
    return EXIT_OK


def _cmd_report(args) -> int:
    records = []
    for path in args.results:
        records.extend(read_results_csv(path))
    if not records:
        print("no records found", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = _results_dir(args)
    summary = write_summary_csv(out_dir / "summary.csv", records)
    figures = render_training_curves(records, out_dir / "figures")
    bars = render_normalized_bars(records, out_dir / "figures" / "normalized_returns.png")
    print(f"summary written to {summary}")
    for fig in figures:
        print(f"figure written to {fig}")
    if bars:
        print(f"figure written to {bars}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="marlbench", description=__doc__)
    parser.add_argument("--results-dir", default=None, help="output directory (default: $MARLBENCH_RESULTS_DIR or ./results)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-tasks", help="print the registered benchmark tasks")

    def add_run_args(p, with_algo=True):
        p.add_argument("--task", required=True)
        if with_algo:
            p.add_argument("--algo", required=True, help=f"one of {', '.join(ALGORITHMS)}")
        p.add_argument("--seeds", type=int, nargs="+", default=[0])
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--eval-episodes", type=int, default=100)
        p.add_argument("--time-limit", type=int, default=None)
        p.add_argument("--sharing", choices=["on", "off"], default="on")
        p.add_argument("--config", default=None, help="YAML file of config keys")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    train = sub.add_parser("train", help="train one algorithm on one task")
    add_run_args(train)

    ev = sub.add_parser("evaluate", help="evaluate the random baseline policy on a task")
    add_run_args(ev, with_algo=False)

    bench = sub.add_parser("bench", help="throughput benchmark (10,000 random steps)")
    bench.add_argument("--task", default=None, help="single task; default benchmarks all registered tasks")

    gs = sub.add_parser("grid-search", help="search tuned-grid axes for one algorithm/task")
    add_run_args(gs)
    gs.add_argument("--axes", nargs="+", default=["lr"], help="grid axes: hidden_dim lr reward_standardisation")

    report = sub.add_parser("report", help="summarise results CSVs into tables and figures")
    report.add_argument("results", nargs="+", help="results CSV files produced by train")

    return parser


_COMMANDS = {
    "list-tasks": _cmd_list_tasks,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "bench": _cmd_bench,
    "grid-search": _cmd_grid_search,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, TaskParseError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
