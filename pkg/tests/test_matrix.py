import itertools

import numpy as np
import pytest

from marlbench.envs import ContractViolation, make
from marlbench.envs.matrix import (
    CLIMBING_MATRIX,
    constant_observation,
    make_penalty,
    payoff,
    penalty_matrix,
)


def test_climbing_matrix_entries():
    expected = np.array([[0, 6, 5], [-30, 7, 0], [11, -30, 0]], dtype=float)
    assert np.array_equal(CLIMBING_MATRIX, expected)


def test_climbing_payoff_example():
    assert payoff(CLIMBING_MATRIX, 2, 0) == 11.0


@pytest.mark.parametrize("k", [0, -25, -50, -75, -100])
def test_penalty_matrix_structure(k):
    m = penalty_matrix(k)
    assert m[0, 0] == k and m[2, 2] == k
    assert m[0, 2] == 10 and m[2, 0] == 10
    assert m[1, 1] == 2
    assert np.array_equal(m, m.T)


def test_penalty_payoff_examples():
    assert payoff(penalty_matrix(-25), 0, 0) == -25.0
    for k in (0, -25, -100):
        assert payoff(penalty_matrix(k), 1, 1) == 2.0


def test_payoff_rejects_out_of_range():
    with pytest.raises(ContractViolation):
        payoff(CLIMBING_MATRIX, 3, 0)
    with pytest.raises(ContractViolation):
        payoff(CLIMBING_MATRIX, 0, -1)


def test_constant_observation_everywhere():
    env = make("climbing")
    o_first = env.reset(0)
    assert np.array_equal(o_first[0], constant_observation())
    assert len(o_first[0]) == len(o_first[1])
    obs_t17 = None
    for t in range(18):
        res = env.step([1, 2])
        obs_t17 = res.next_obs
    assert np.array_equal(obs_t17[0], o_first[0])
    # across seeds
    assert np.array_equal(make("climbing").reset(123)[0], o_first[0])


def test_episode_is_25_steps_and_dones_flip_together():
    env = make("penalty-k0")
    env.reset(0)
    for t in range(25):
        res = env.step([0, 2])
        if t < 24:
            assert res.dones == [False, False]
    assert res.dones == [True, True]


def test_episode_return_equals_sum_of_payoffs():
    """Exhaustive oracle over the 9 joint actions: episode return for a
    fixed joint action is 25 x payoff; the climbing maximum is 275 and the
    (1,1) equilibrium yields 175."""
    per_joint = {}
    for a1, a2 in itertools.product(range(3), repeat=2):
        env = make("climbing")
        env.reset(0)
        total = 0.0
        done = False
        while not done:
            res = env.step([a1, a2])
            total += res.team_reward
            done = res.done
        per_joint[(a1, a2)] = total
        assert total == pytest.approx(25 * payoff(CLIMBING_MATRIX, a1, a2))
    assert max(per_joint.values()) == pytest.approx(275.0)
    assert per_joint[(1, 1)] == pytest.approx(175.0)


def test_penalty_k0_greedy_corner_episode_return():
    env = make_penalty(0)
    env.reset(0)
    total = 0.0
    done = False
    while not done:
        res = env.step([2, 0])
        total += res.team_reward
        done = res.done
    assert total == pytest.approx(250.0)


def test_rewards_identical_across_agents():
    env = make("penalty-k-50")
    env.reset(0)
    for actions in ([0, 0], [1, 2], [2, 2]):
        res = env.step(actions)
        assert res.rewards[0] == res.rewards[1]
