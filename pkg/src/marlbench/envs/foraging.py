"""Level-Based Foraging grid world.

Levelled agents roam an ``x_size`` x ``y_size`` grid collecting levelled
food items.  A food is collected when the levels of all adjacent agents
that choose Pickup in the same tick sum to at least the food's level; the
collectors split a reward normalised so a fully solved episode returns
exactly 1.0 summed over agents.

Conventions fixed by this implementation (the task family leaves them
open):

* Coordinates are (x, y) with (0, 0) the bottom-left cell and Move North
  increasing y.
* Loading adjacency is von Neumann (4-neighbour).
* Agent levels are sampled uniformly from {1, 2}.  Food levels are the sum
  of all agent levels in forced-cooperation mode, else uniform from
  {1, ..., min(sum of agent levels, 4)} so every item is collectable.
* Moves into occupied or out-of-grid cells become Noop, and agents
  targeting the same cell in one tick all stay (symmetric block).
* Spawn positions are rejection-sampled: agents on distinct cells, food on
  agent-free cells with no two foods Chebyshev-adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import Rng
from .core import ActionSpace, ContractViolation, MultiAgentEnv, ObservationSpace

NOOP, NORTH, SOUTH, WEST, EAST, PICKUP = range(6)
_MOVES = {NORTH: (0, 1), SOUTH: (0, -1), WEST: (-1, 0), EAST: (1, 0)}

MASKED_TRIPLET = (-1.0, -1.0, 0.0)

_SPAWN_ATTEMPTS = 1000


@dataclass(frozen=True)
class LbfConfig:
    x_size: int
    y_size: int
    n_agents: int
    n_food: int
    sight: int | None = None  # None = full observability, 2 = 5x5 window
    coop: bool = False
    time_limit: int = 50

    def validate(self) -> None:
        if not (5 <= self.x_size <= 20 and 5 <= self.y_size <= 20):
            raise ValueError("grid sides must be in [5, 20]")
        if not (2 <= self.n_agents <= 5):
            raise ValueError("agent count must be in [2, 5]")
        if not (1 <= self.n_food <= 10):
            raise ValueError("food count must be in [1, 10]")
        if self.coop and self.n_agents > 4:
            raise ValueError("forced cooperation supports at most 4 agents")
        if self.sight not in (None, 2):
            raise ValueError("sight must be full (None) or radius 2")
        if self.time_limit < 1:
            raise ValueError("time limit must be positive")


@dataclass
class Entity:
    x: int
    y: int
    level: int
    alive: bool = True


def lbf_reward(food_level: int, agent_level: int, sum_food_levels: int, sum_loading_levels: int) -> float:
    """Per-collector reward share for one food pickup.

    ``sum_food_levels`` is the total level of every food spawned in the
    episode, which makes per-agent returns on a solved episode sum to 1.
    """
    if min(food_level, agent_level, sum_food_levels, sum_loading_levels) <= 0:
        raise ContractViolation("reward terms must be positive")
    return (food_level * agent_level) / (sum_food_levels * sum_loading_levels)


class ForagingEnv(MultiAgentEnv):
    def __init__(self, config: LbfConfig, name: str = "lbf"):
        config.validate()
        self.config = config
        self.name = name
        self.time_limit = config.time_limit
        self.action_space = ActionSpace((6,) * config.n_agents)
        obs_dim = 3 * (config.n_food + config.n_agents)
        self.observation_space = ObservationSpace((obs_dim,) * config.n_agents)
        self.agents: list[Entity] = []
        self.foods: list[Entity] = []
        self._sum_food_levels = 0
        super().__init__()

    # -- spawning --------------------------------------------------------

    def _random_cell(self, rng: Rng) -> tuple[int, int]:
        return rng.randrange(self.config.x_size), rng.randrange(self.config.y_size)

    def _reset_state(self, rng: Rng) -> list[np.ndarray]:
        cfg = self.config
        levels = [rng.randint(1, 2) for _ in range(cfg.n_agents)]
        self.agents = []
        occupied: set[tuple[int, int]] = set()
        for level in levels:
            for _ in range(_SPAWN_ATTEMPTS):
                cell = self._random_cell(rng)
                if cell not in occupied:
                    break
            else:
                raise ValueError("could not place agents on the grid")
            occupied.add(cell)
            self.agents.append(Entity(cell[0], cell[1], level))

        max_level = min(sum(levels), 4)
        self.foods = []
        food_cells: list[tuple[int, int]] = []
        for _ in range(cfg.n_food):
            level = sum(levels) if cfg.coop else rng.randint(1, max_level)
            for _ in range(_SPAWN_ATTEMPTS):
                cell = self._random_cell(rng)
                if cell in occupied:
                    continue
                if any(max(abs(cell[0] - fx), abs(cell[1] - fy)) <= 1 for fx, fy in food_cells):
                    continue
                break
            else:
                raise ValueError("could not place food items; grid too crowded")
            occupied.add(cell)
            food_cells.append(cell)
            self.foods.append(Entity(cell[0], cell[1], level))
        self._sum_food_levels = sum(f.level for f in self.foods)
        return [self._observe(i) for i in range(cfg.n_agents)]

    # -- dynamics --------------------------------------------------------

    def _step_state(self, actions):
        cfg = self.config
        agent_cells = {(a.x, a.y) for a in self.agents}
        food_cells = {(f.x, f.y) for f in self.foods if f.alive}

        targets: list[tuple[int, int]] = []
        for agent, action in zip(self.agents, actions):
            cell = (agent.x, agent.y)
            if action in _MOVES:
                dx, dy = _MOVES[action]
                nxt = (agent.x + dx, agent.y + dy)
                in_grid = 0 <= nxt[0] < cfg.x_size and 0 <= nxt[1] < cfg.y_size
                if in_grid and nxt not in agent_cells and nxt not in food_cells:
                    cell = nxt
            targets.append(cell)

        counts: dict[tuple[int, int], int] = {}
        for cell in targets:
            counts[cell] = counts.get(cell, 0) + 1
        for agent, target in zip(self.agents, targets):
            if counts[target] == 1 or target == (agent.x, agent.y):
                agent.x, agent.y = target

        rewards = [0.0] * cfg.n_agents
        for food in self.foods:
            if not food.alive:
                continue
            loaders = [
                i
                for i, (agent, action) in enumerate(zip(self.agents, actions))
                if action == PICKUP and abs(agent.x - food.x) + abs(agent.y - food.y) == 1
            ]
            if not loaders:
                continue
            loading_levels = sum(self.agents[i].level for i in loaders)
            if loading_levels >= food.level:
                food.alive = False
                for i in loaders:
                    rewards[i] += lbf_reward(
                        food.level, self.agents[i].level, self._sum_food_levels, loading_levels
                    )

        remaining = sum(1 for f in self.foods if f.alive)
        obs = [self._observe(i) for i in range(cfg.n_agents)]
        return obs, rewards, remaining == 0, {"foods_remaining": remaining}

    # -- observations ----------------------------------------------------

    def _observe(self, agent_index: int) -> np.ndarray:
        """Triplets (x, y, level): foods in spawn order, then agents with
        the observer's own triplet first; hidden entities read (-1, -1, 0)."""
        observer = self.agents[agent_index]
        sight = self.config.sight
        if sight is None:
            origin = (0, 0)
        else:
            origin = (observer.x - sight, observer.y - sight)

        def triplet(entity: Entity, alive: bool) -> tuple[float, float, float]:
            visible = alive and (
                sight is None
                or max(abs(entity.x - observer.x), abs(entity.y - observer.y)) <= sight
            )
            if not visible:
                return MASKED_TRIPLET
            return (float(entity.x - origin[0]), float(entity.y - origin[1]), float(entity.level))

        values: list[float] = []
        for food in self.foods:
            values.extend(triplet(food, food.alive))
        order = [agent_index] + [i for i in range(self.config.n_agents) if i != agent_index]
        for i in order:
            values.extend(triplet(self.agents[i], True))
        return np.array(values, dtype=np.float64)

    def render_text(self) -> str:
        grid = [["." for _ in range(self.config.x_size)] for _ in range(self.config.y_size)]
        for f in self.foods:
            if f.alive:
                grid[f.y][f.x] = str(f.level)
        for i, a in enumerate(self.agents):
            grid[a.y][a.x] = chr(ord("a") + i)
        return "\n".join("".join(row) for row in reversed(grid))
