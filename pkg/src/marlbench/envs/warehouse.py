"""Multi-robot warehouse: rotating robots deliver requested shelves.

Layout: shelves sit in groups of 8x2 storage cells arranged in a grid of
(group_rows, group_cols) blocks separated by one-cell highways, with a
two-row highway strip at the bottom whose centre two cells are the goal
locations.  Coordinates are (x, y) with (0, 0) the top-left cell and y
growing downwards, so goals have the largest y.

Rules fixed by this implementation:

* A robot moves forward into its facing cell; simultaneous conflicts are
  resolved to maximise mobility (see :func:`resolve_collisions`).
* An unladen robot may drive under stored shelves; a laden robot may not
  enter a cell holding another shelf.
* Load picks up the shelf on the robot's cell; unload drops the carried
  shelf, allowed only on an empty storage cell.
* A delivery scores when a robot carrying a *requested* shelf moves onto
  a goal cell: the team earns reward 1 (split evenly across agents), the
  shelf is unmarked, and a new request is sampled uniformly from the
  unrequested shelves so the queue size never changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import Rng
from .core import ActionSpace, ContractViolation, MultiAgentEnv, ObservationSpace

TURN_LEFT, TURN_RIGHT, FORWARD, TOGGLE_LOAD = range(4)

UP, DOWN, LEFT, RIGHT = range(4)
_HEADING_DELTAS = {UP: (0, -1), DOWN: (0, 1), LEFT: (-1, 0), RIGHT: (1, 0)}
# counter-clockwise heading cycle used by TURN_LEFT
_CCW = {UP: LEFT, LEFT: DOWN, DOWN: RIGHT, RIGHT: UP}
_CW = {v: k for k, v in _CCW.items()}

SIZE_CLASSES = {
    "tiny": (1, 3),
    "small": (2, 3),
    "medium": (2, 5),
    "large": (3, 5),
}

GROUP_SHELF_ROWS = 8
GROUP_SHELF_COLS = 2

TIME_LIMIT = 500


@dataclass(frozen=True)
class WarehouseLayout:
    group_rows: int
    group_cols: int

    @property
    def width(self) -> int:
        return (GROUP_SHELF_COLS + 1) * self.group_cols + 1

    @property
    def height(self) -> int:
        return (GROUP_SHELF_ROWS + 1) * self.group_rows + 2

    def is_storage(self, x: int, y: int) -> bool:
        col_period = GROUP_SHELF_COLS + 1
        row_period = GROUP_SHELF_ROWS + 1
        in_storage_col = x % col_period != 0
        row_offset = (y - 1) % row_period
        in_storage_row = 1 <= y <= self.group_rows * row_period - 1 and row_offset < GROUP_SHELF_ROWS
        return in_storage_col and in_storage_row

    def is_highway(self, x: int, y: int) -> bool:
        return not self.is_storage(x, y)

    def storage_cells(self) -> list[tuple[int, int]]:
        return [
            (x, y)
            for y in range(self.height)
            for x in range(self.width)
            if self.is_storage(x, y)
        ]

    def goal_cells(self) -> list[tuple[int, int]]:
        mid = self.width // 2
        return [(mid - 1, self.height - 1), (mid, self.height - 1)]

    @classmethod
    def from_size(cls, size: str) -> "WarehouseLayout":
        if size not in SIZE_CLASSES:
            raise ValueError(f"unknown warehouse size {size!r}")
        rows, cols = SIZE_CLASSES[size]
        return cls(rows, cols)


@dataclass
class Robot:
    x: int
    y: int
    heading: int
    carrying: int | None = None


@dataclass
class Shelf:
    x: int
    y: int
    requested: bool = False
    carried_by: int | None = None


def request_queue_size(n_agents: int, difficulty: str | None) -> int:
    if difficulty == "easy":
        return 2 * n_agents
    if difficulty == "hard":
        return max(1, n_agents // 2)
    if difficulty is None:
        return n_agents
    raise ValueError(f"unknown difficulty {difficulty!r}")


def resolve_collisions(
    positions: list[tuple[int, int]], targets: list[tuple[int, int]]
) -> list[bool]:
    """Decide which robots move given their intended target cells.

    Each target is the robot's own cell (stay) or the forward-adjacent
    cell.  Rules, applied in order:

    1. Of several claimants to one cell, a robot whose current cell is
       another mover's target wins (it unblocks traffic); remaining ties
       go to the lowest index.
    2. A robot moves iff its target is free or vacated this tick; chains
       resolve transitively and rotations of three or more robots all
       move.
    3. Head-on swaps (two robots exchanging cells) are rejected: both
       stay.
    """
    n = len(positions)
    occupant = {p: i for i, p in enumerate(positions)}
    wants_move = [targets[i] != positions[i] for i in range(n)]

    claims: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        if wants_move[i]:
            claims.setdefault(targets[i], []).append(i)

    moving = set()
    for claimants in claims.values():
        if len(claimants) == 1:
            moving.add(claimants[0])
            continue
        blocking = [
            c
            for c in claimants
            if any(j != c and wants_move[j] and targets[j] == positions[c] for j in range(n))
        ]
        moving.add(min(blocking) if blocking else min(claimants))

    changed = True
    while changed:
        changed = False
        for i in sorted(moving):
            j = occupant.get(targets[i])
            if j is None or j == i or j not in moving:
                if j is not None and j != i:
                    moving.discard(i)
                    changed = True
                continue
            if targets[j] == positions[i]:  # 2-cycle swap
                moving.discard(i)
                moving.discard(j)
                changed = True
    return [i in moving for i in range(n)]


class WarehouseEnv(MultiAgentEnv):
    def __init__(self, size: str, n_agents: int, difficulty: str | None = None, name: str = "rware"):
        if not (1 <= n_agents <= 20):
            raise ValueError("agent count must be in [1, 20]")
        self.layout = WarehouseLayout.from_size(size)
        self.n_requests = request_queue_size(n_agents, difficulty)
        self.name = name
        self.time_limit = TIME_LIMIT
        self.action_space = ActionSpace((4,) * n_agents)
        self.observation_space = ObservationSpace((71,) * n_agents)
        self.robots: list[Robot] = []
        self.shelves: list[Shelf] = []
        self.deliveries = 0
        self._request_rng: Rng | None = None
        super().__init__()
        if self.n_requests >= len(self.layout.storage_cells()):
            raise ValueError("request queue cannot cover every shelf")

    # -- state access ----------------------------------------------------

    @property
    def requested_ids(self) -> set[int]:
        return {i for i, s in enumerate(self.shelves) if s.requested}

    def _stationary_shelf_at(self) -> dict[tuple[int, int], int]:
        return {
            (s.x, s.y): i for i, s in enumerate(self.shelves) if s.carried_by is None
        }

    # -- spawning ----------------------------------------------------------

    def _reset_state(self, rng: Rng) -> list[np.ndarray]:
        self._request_rng = rng.spawn(1)
        self.deliveries = 0
        self.shelves = [Shelf(x, y) for x, y in self.layout.storage_cells()]
        for i in rng.sample(range(len(self.shelves)), self.n_requests):
            self.shelves[i].requested = True

        highway = [
            (x, y)
            for y in range(self.layout.height)
            for x in range(self.layout.width)
            if self.layout.is_highway(x, y)
        ]
        cells = rng.sample(highway, self.n_agents)
        self.robots = [
            Robot(x, y, heading=rng.randrange(4)) for (x, y) in cells
        ]
        return [self._observe(i) for i in range(self.n_agents)]

    # -- dynamics ----------------------------------------------------------

    def sample_new_request(self) -> int:
        """Mark a uniformly chosen unrequested shelf as requested."""
        candidates = [i for i, s in enumerate(self.shelves) if not s.requested]
        if not candidates:
            raise ContractViolation("every shelf is already requested")
        pick = candidates[self._request_rng.randrange(len(candidates))]
        self.shelves[pick].requested = True
        return pick

    def _step_state(self, actions):
        for robot, action in zip(self.robots, actions):
            if action == TURN_LEFT:
                robot.heading = _CCW[robot.heading]
            elif action == TURN_RIGHT:
                robot.heading = _CW[robot.heading]

        shelf_at = self._stationary_shelf_at()
        positions = [(r.x, r.y) for r in self.robots]
        targets = list(positions)
        for i, (robot, action) in enumerate(zip(self.robots, actions)):
            if action != FORWARD:
                continue
            dx, dy = _HEADING_DELTAS[robot.heading]
            nxt = (robot.x + dx, robot.y + dy)
            if not (0 <= nxt[0] < self.layout.width and 0 <= nxt[1] < self.layout.height):
                continue
            if robot.carrying is not None and nxt in shelf_at:
                continue  # laden robots cannot pass under stored shelves
            targets[i] = nxt

        moves = resolve_collisions(positions, targets)
        rewards = [0.0] * self.n_agents
        goal_cells = set(self.layout.goal_cells())
        for i, robot in enumerate(self.robots):
            if not moves[i]:
                continue
            robot.x, robot.y = targets[i]
            if robot.carrying is not None:
                shelf = self.shelves[robot.carrying]
                shelf.x, shelf.y = robot.x, robot.y
                if shelf.requested and (robot.x, robot.y) in goal_cells:
                    shelf.requested = False
                    self.sample_new_request()
                    self.deliveries += 1
                    share = 1.0 / self.n_agents
                    for j in range(self.n_agents):
                        rewards[j] += share

        shelf_at = self._stationary_shelf_at()
        for i, (robot, action) in enumerate(zip(self.robots, actions)):
            if action != TOGGLE_LOAD:
                continue
            if robot.carrying is None:
                idx = shelf_at.get((robot.x, robot.y))
                if idx is not None:
                    self.shelves[idx].carried_by = i
                    robot.carrying = idx
                    del shelf_at[(robot.x, robot.y)]
            else:
                cell = (robot.x, robot.y)
                if self.layout.is_storage(*cell) and cell not in shelf_at:
                    shelf = self.shelves[robot.carrying]
                    shelf.carried_by = None
                    shelf.x, shelf.y = cell
                    shelf_at[cell] = robot.carrying
                    robot.carrying = None

        obs = [self._observe(i) for i in range(self.n_agents)]
        return obs, rewards, False, {"deliveries": self.deliveries}

    # -- observations --------------------------------------------------------

    def _observe(self, agent_index: int) -> np.ndarray:
        """71 values: [x, y, carrying], heading one-hot, highway flag, then
        a 3x3 window in row-major order with 7 values per cell: another
        agent present, its heading one-hot, stationary shelf present,
        shelf requested."""
        robot = self.robots[agent_index]
        values = [float(robot.x), float(robot.y), float(robot.carrying is not None)]
        heading = [0.0] * 4
        heading[robot.heading] = 1.0
        values.extend(heading)
        values.append(float(self.layout.is_highway(robot.x, robot.y)))

        robot_at = {
            (r.x, r.y): i for i, r in enumerate(self.robots) if i != agent_index
        }
        shelf_at = self._stationary_shelf_at()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                cell = (robot.x + dx, robot.y + dy)
                in_grid = 0 <= cell[0] < self.layout.width and 0 <= cell[1] < self.layout.height
                group = [0.0] * 7
                if in_grid:
                    other = robot_at.get(cell)
                    if other is not None:
                        group[0] = 1.0
                        group[1 + self.robots[other].heading] = 1.0
                    shelf_idx = shelf_at.get(cell)
                    if shelf_idx is not None:
                        group[5] = 1.0
                        group[6] = float(self.shelves[shelf_idx].requested)
                values.extend(group)
        return np.array(values, dtype=np.float64)

    def render_text(self) -> str:
        rows = []
        shelf_at = self._stationary_shelf_at()
        goal = set(self.layout.goal_cells())
        robot_at = {(r.x, r.y): i for i, r in enumerate(self.robots)}
        for y in range(self.layout.height):
            row = []
            for x in range(self.layout.width):
                if (x, y) in robot_at:
                    row.append(chr(ord("A") + robot_at[(x, y)] % 26))
                elif (x, y) in shelf_at:
                    row.append("$" if self.shelves[shelf_at[(x, y)]].requested else "#")
                elif (x, y) in goal:
                    row.append("G")
                else:
                    row.append(".")
            rows.append("".join(row))
        return "\n".join(rows)
