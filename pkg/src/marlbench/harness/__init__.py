from .bench import BENCH_STEPS, ThroughputResult, bench_throughput, format_throughput_table
from .evaluate import EVAL_EPISODES, EvalSchedule, MetricsRecord, RandomPolicy, evaluate
from .gridsearch import GridSearchResult, grid_search
from .metrics import avg_return, max_return, normalize_returns, t_confidence_interval
from .report import (
    read_results_csv,
    render_normalized_bars,
    render_training_curves,
    write_results_csv,
    write_summary_csv,
)
from .train import TrainResult, train_run

__all__ = [
    "BENCH_STEPS",
    "EVAL_EPISODES",
    "EvalSchedule",
    "GridSearchResult",
    "MetricsRecord",
    "RandomPolicy",
    "ThroughputResult",
    "TrainResult",
    "avg_return",
    "bench_throughput",
    "evaluate",
    "format_throughput_table",
    "grid_search",
    "max_return",
    "normalize_returns",
    "read_results_csv",
    "render_normalized_bars",
    "render_training_curves",
    "t_confidence_interval",
    "train_run",
    "write_results_csv",
    "write_summary_csv",
]
