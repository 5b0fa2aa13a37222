"""Task naming grammar, parsing, and the benchmark task registry.

Grammar (all names end in ``-v1``):

* matrix games:  ``climbing`` | ``penalty-k<k>`` with k in {0,-25,-50,-75,-100}
* foraging:      ``Foraging[-2s]-<x>x<y>-<n>p-<f>f[-coop]-v1``
* warehouse:     ``rware-<size>-<n>ag[-easy|-hard]-v1``

Every valid grammar combination is constructible through :func:`make`;
the benchmark tasks used by the evaluation protocol are pre-registered
and listed by :func:`registered_tasks`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .foraging import ForagingEnv, LbfConfig
from .matrix import PENALTY_K_VALUES, make_climbing, make_penalty
from .warehouse import SIZE_CLASSES, WarehouseEnv


class TaskParseError(ValueError):
    """Raised when a task name does not match the grammar."""

    def __init__(self, name: str, position: int, message: str):
        self.name = name
        self.position = position
        super().__init__(f"{name!r}: {message} (at position {position})")


@dataclass(frozen=True)
class TaskSpec:
    family: str  # matrix | lbf | rware
    fields: tuple[tuple[str, object], ...]

    def __getitem__(self, key: str):
        return dict(self.fields)[key]

    @property
    def canonical_name(self) -> str:
        f = dict(self.fields)
        if self.family == "matrix":
            return f["game"] if f["game"] == "climbing" else f"penalty-k{f['k']}"
        if self.family == "lbf":
            sight = "-2s" if f["sight"] == 2 else ""
            coop = "-coop" if f["coop"] else ""
            return f"Foraging{sight}-{f['x_size']}x{f['y_size']}-{f['n_agents']}p-{f['n_food']}f{coop}-v1"
        if self.family == "rware":
            diff = f"-{f['difficulty']}" if f["difficulty"] else ""
            return f"rware-{f['size']}-{f['n_agents']}ag{diff}-v1"
        raise AssertionError(self.family)


_LBF_RE = re.compile(
    r"^Foraging(?P<sight>-2s)?-(?P<x>\d+)x(?P<y>\d+)-(?P<agents>\d+)p-(?P<food>\d+)f(?P<coop>-coop)?-v1$"
)
_RWARE_RE = re.compile(
    r"^rware-(?P<size>[a-z]+)-(?P<agents>\d+)ag(?P<diff>-easy|-hard)?-v1$"
)
_PENALTY_RE = re.compile(r"^penalty-k(?P<k>0|-\d+)$")


def parse_task_name(name: str) -> TaskSpec:
    if name == "climbing":
        return TaskSpec("matrix", (("game", "climbing"),))
    if name.startswith("penalty"):
        m = _PENALTY_RE.match(name)
        if not m:
            raise TaskParseError(name, len("penalty"), "expected penalty-k{0,-25,-50,-75,-100}")
        k = int(m.group("k"))
        if k not in PENALTY_K_VALUES:
            raise TaskParseError(name, name.index("k") + 1, f"k must be one of {PENALTY_K_VALUES}")
        return TaskSpec("matrix", (("game", "penalty"), ("k", k)))
    if name.startswith("Foraging"):
        m = _LBF_RE.match(name)
        if not m:
            raise TaskParseError(name, len("Foraging"), "expected Foraging[-2s]-<x>x<y>-<n>p-<f>f[-coop]-v1")
        spec = TaskSpec(
            "lbf",
            (
                ("sight", 2 if m.group("sight") else None),
                ("x_size", int(m.group("x"))),
                ("y_size", int(m.group("y"))),
                ("n_agents", int(m.group("agents"))),
                ("n_food", int(m.group("food"))),
                ("coop", bool(m.group("coop"))),
            ),
        )
        try:
            _lbf_config(spec).validate()
        except ValueError as exc:
            raise TaskParseError(name, len("Foraging"), str(exc)) from exc
        return spec
    if name.startswith("rware"):
        m = _RWARE_RE.match(name)
        if not m:
            raise TaskParseError(name, len("rware"), "expected rware-<size>-<n>ag[-easy|-hard]-v1")
        size = m.group("size")
        if size not in SIZE_CLASSES:
            raise TaskParseError(
                name, name.index(size), f"unknown size {size!r}; expected one of {sorted(SIZE_CLASSES)}"
            )
        n_agents = int(m.group("agents"))
        if not (1 <= n_agents <= 20):
            raise TaskParseError(name, name.index("ag"), "agent count must be in [1, 20]")
        diff = m.group("diff")
        return TaskSpec(
            "rware",
            (
                ("size", size),
                ("n_agents", n_agents),
                ("difficulty", diff.lstrip("-") if diff else None),
            ),
        )
    raise TaskParseError(name, 0, "unknown task family")


def _lbf_config(spec: TaskSpec, time_limit: int = 50) -> LbfConfig:
    return LbfConfig(
        x_size=spec["x_size"],
        y_size=spec["y_size"],
        n_agents=spec["n_agents"],
        n_food=spec["n_food"],
        sight=spec["sight"],
        coop=spec["coop"],
        time_limit=time_limit,
    )


def make(name: str, time_limit: int | None = None):
    """Construct the environment for any valid task name."""
    spec = parse_task_name(name)
    if spec.family == "matrix":
        env = make_climbing() if spec["game"] == "climbing" else make_penalty(spec["k"])
    elif spec.family == "lbf":
        env = ForagingEnv(_lbf_config(spec, time_limit or 50), name=spec.canonical_name)
    else:
        env = WarehouseEnv(
            spec["size"], spec["n_agents"], spec["difficulty"], name=spec.canonical_name
        )
    if time_limit is not None and spec.family != "lbf":
        env.time_limit = time_limit
        env._clock.limit = time_limit
    return env


BENCHMARK_TASKS = (
    "climbing",
    "penalty-k0",
    "penalty-k-25",
    "penalty-k-50",
    "penalty-k-75",
    "penalty-k-100",
    "Foraging-8x8-2p-2f-coop-v1",
    "Foraging-2s-8x8-2p-2f-coop-v1",
    "Foraging-10x10-3p-3f-v1",
    "Foraging-2s-10x10-3p-3f-v1",
    "Foraging-15x15-3p-5f-v1",
    "Foraging-15x15-4p-3f-v1",
    "Foraging-15x15-4p-5f-v1",
    "rware-tiny-2ag-v1",
    "rware-tiny-4ag-v1",
    "rware-small-4ag-v1",
)


def registered_tasks() -> tuple[str, ...]:
    return BENCHMARK_TASKS


def task_family(name: str) -> str:
    return parse_task_name(name).family
