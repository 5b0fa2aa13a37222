"""Repeated two-player common-payoff matrix games (climbing and penalty).

Both games run for 25 steps with a constant observation of ``[1.0]`` per
agent.  Each step both agents receive half of the joint payoff, so the
team reward (the sum over agents) equals the payoff entry counted once and
episode returns line up with the conventional climbing/penalty scale
(e.g. 25 x 10 = 250 for greedy corner play with no penalty).
"""

from __future__ import annotations

import numpy as np

from ..rng import Rng
from .core import ActionSpace, ContractViolation, MultiAgentEnv, ObservationSpace

CLIMBING_MATRIX = np.array(
    [
        [0.0, 6.0, 5.0],
        [-30.0, 7.0, 0.0],
        [11.0, -30.0, 0.0],
    ]
)

PENALTY_K_VALUES = (0, -25, -50, -75, -100)

EPISODE_LENGTH = 25


def penalty_matrix(k: float) -> np.ndarray:
    if k > 0:
        raise ValueError("penalty term k must be <= 0")
    return np.array(
        [
            [k, 0.0, 10.0],
            [0.0, 2.0, 0.0],
            [10.0, 0.0, k],
        ]
    )


def payoff(matrix: np.ndarray, a1: int, a2: int) -> float:
    """Joint payoff for (row, column) play; both agents receive this value."""
    if not (0 <= a1 < 3 and 0 <= a2 < 3):
        raise ContractViolation(f"matrix game actions must be in [0, 3), got ({a1}, {a2})")
    return float(matrix[a1, a2])


def constant_observation() -> np.ndarray:
    """The fixed per-agent observation, identical at every step and seed."""
    return np.array([1.0], dtype=np.float64)


class MatrixGameEnv(MultiAgentEnv):
    def __init__(self, matrix: np.ndarray, name: str):
        self.matrix = np.asarray(matrix, dtype=np.float64)
        if self.matrix.shape != (3, 3):
            raise ValueError("payoff matrix must be 3x3")
        self.name = name
        self.time_limit = EPISODE_LENGTH
        self.action_space = ActionSpace((3, 3))
        self.observation_space = ObservationSpace((1, 1))
        super().__init__()

    def _reset_state(self, rng: Rng) -> list[np.ndarray]:
        return [constant_observation(), constant_observation()]

    def _step_state(self, actions):
        p = payoff(self.matrix, actions[0], actions[1])
        obs = [constant_observation(), constant_observation()]
        # split so the team (summed) reward counts the payoff once
        return obs, [p / 2.0, p / 2.0], False, {}


def make_climbing() -> MatrixGameEnv:
    return MatrixGameEnv(CLIMBING_MATRIX, "climbing")


def make_penalty(k: int) -> MatrixGameEnv:
    if k not in PENALTY_K_VALUES:
        raise ValueError(f"penalty k must be one of {PENALTY_K_VALUES}")
    return MatrixGameEnv(penalty_matrix(k), f"penalty-k{k}")
