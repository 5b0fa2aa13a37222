from .core import (
    ActionSpace,
    ContractViolation,
    EnvStepError,
    EpisodeClock,
    MultiAgentEnv,
    ObservationSpace,
    StepResult,
    VectorizedRunner,
    run_vectorized,
)
from .tasks import BENCHMARK_TASKS, TaskParseError, TaskSpec, make, parse_task_name, registered_tasks

__all__ = [
    "ActionSpace",
    "BENCHMARK_TASKS",
    "ContractViolation",
    "EnvStepError",
    "EpisodeClock",
    "MultiAgentEnv",
    "ObservationSpace",
    "StepResult",
    "TaskParseError",
    "TaskSpec",
    "VectorizedRunner",
    "make",
    "parse_task_name",
    "registered_tasks",
    "run_vectorized",
]
