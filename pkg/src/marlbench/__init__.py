"""Cooperative multi-agent RL benchmark suite.

Environments (repeated matrix games, level-based foraging, multi-robot
warehouse), nine trainers built on a small reverse-mode autodiff core,
and an evaluation harness with a throughput benchmark and CSV/figure
reporting.
"""

import os as _os

# the networks are tiny; multi-threaded BLAS only adds dispatch overhead
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    _os.environ.setdefault(_var, "1")

from .envs import make, parse_task_name, registered_tasks
from .rng import Rng, derive_seed

__version__ = "0.1.0"

__all__ = ["Rng", "derive_seed", "make", "parse_task_name", "registered_tasks", "__version__"]
