import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marlbench.envs import ContractViolation, make
from marlbench.envs.foraging import (
    EAST,
    NOOP,
    NORTH,
    PICKUP,
    SOUTH,
    WEST,
    Entity,
    ForagingEnv,
    LbfConfig,
    lbf_reward,
)
from marlbench.rng import Rng


def fresh_env(**overrides) -> ForagingEnv:
    base = dict(x_size=8, y_size=8, n_agents=2, n_food=2, sight=None, coop=False)
    base.update(overrides)
    env = ForagingEnv(LbfConfig(**base))
    env.reset(0)
    return env


def place(env, agents, foods):
    """Overwrite the spawned state with an explicit scenario."""
    env.agents = [Entity(x, y, level) for (x, y, level) in agents]
    env.foods = [Entity(x, y, level) for (x, y, level) in foods]
    env._sum_food_levels = sum(f.level for f in env.foods)


def test_reward_formula_examples():
    assert lbf_reward(2, 1, 2, 2) == pytest.approx(0.5)
    assert lbf_reward(1, 2, 4, 2) == pytest.approx(0.25)
    with pytest.raises(ContractViolation):
        lbf_reward(1, 1, 0, 1)


def test_cooperative_pickup_splits_reward():
    env = fresh_env(n_food=1)
    place(env, agents=[(2, 2, 1), (4, 2, 1)], foods=[(3, 2, 2)])
    res = env.step([PICKUP, PICKUP])
    assert res.rewards == pytest.approx([0.5, 0.5])
    assert res.team_reward == pytest.approx(1.0)
    assert res.done  # all food collected ends the episode early


def test_underlevel_pickup_fails():
    env = fresh_env(n_food=1)
    place(env, agents=[(2, 2, 1), (7, 7, 1)], foods=[(3, 2, 2)])
    res = env.step([PICKUP, NOOP])
    assert res.rewards == [0.0, 0.0]
    assert env.foods[0].alive


def test_move_into_wall_is_noop():
    env = fresh_env()
    place(env, agents=[(0, 7, 1), (5, 5, 1)], foods=[(2, 2, 1), (6, 6, 1)])
    res = env.step([NORTH, NOOP])
    assert (env.agents[0].x, env.agents[0].y) == (0, 7)
    assert res.rewards == [0.0, 0.0]


def test_moves_apply_in_all_directions():
    env = fresh_env()
    place(env, agents=[(4, 4, 1), (0, 0, 1)], foods=[(7, 7, 1), (2, 6, 1)])
    env.step([NORTH, NOOP])
    assert (env.agents[0].x, env.agents[0].y) == (4, 5)
    env.step([EAST, NOOP])
    assert (env.agents[0].x, env.agents[0].y) == (5, 5)
    env.step([SOUTH, NOOP])
    assert (env.agents[0].x, env.agents[0].y) == (5, 4)
    env.step([WEST, NOOP])
    assert (env.agents[0].x, env.agents[0].y) == (4, 4)


def test_same_target_symmetric_block():
    env = fresh_env()
    place(env, agents=[(3, 3, 1), (5, 3, 1)], foods=[(0, 0, 1), (7, 7, 1)])
    env.step([EAST, WEST])  # both target (4, 3)
    assert (env.agents[0].x, env.agents[0].y) == (3, 3)
    assert (env.agents[1].x, env.agents[1].y) == (5, 3)


def test_blocked_by_agent_and_food():
    env = fresh_env()
    place(env, agents=[(3, 3, 1), (4, 3, 1)], foods=[(3, 4, 1), (7, 7, 1)])
    env.step([EAST, NOOP])  # into the other agent
    assert (env.agents[0].x, env.agents[0].y) == (3, 3)
    env.step([NORTH, NOOP])  # into food
    assert (env.agents[0].x, env.agents[0].y) == (3, 3)


def test_observation_layout_8x8_2p_3f():
    env = make("Foraging-8x8-2p-3f-v1")
    obs = env.reset(5)
    assert all(len(o) == 15 for o in obs)
    # both agents report the same 9 food entries
    assert np.array_equal(obs[0][:9], obs[1][:9])
    # own triplet first: agent 0's first agent-triplet equals agent 1's second
    assert np.array_equal(obs[0][9:12], obs[1][12:15])
    assert np.array_equal(obs[0][12:15], obs[1][9:12])


def test_collected_food_masks_to_sentinel():
    env = fresh_env(n_food=2)
    place(env, agents=[(2, 2, 2), (6, 6, 2)], foods=[(3, 2, 1), (0, 7, 1)])
    res = env.step([PICKUP, NOOP])
    assert res.rewards[0] > 0
    assert tuple(res.next_obs[0][:3]) == (-1.0, -1.0, 0.0)
    assert tuple(res.next_obs[1][:3]) == (-1.0, -1.0, 0.0)
    # second food still visible
    assert tuple(res.next_obs[0][3:6]) == (0.0, 7.0, 1.0)


def test_sight_radius_masks_far_entities():
    env = fresh_env(sight=2, n_food=1)
    place(env, agents=[(4, 4, 1), (0, 0, 1)], foods=[(7, 7, 2)])
    obs = env._observe(0)
    # food at Chebyshev distance 3 and agent at distance 4: both masked
    assert tuple(obs[0:3]) == (-1.0, -1.0, 0.0)
    assert tuple(obs[6:9]) == (-1.0, -1.0, 0.0)
    # own triplet in window coordinates: centre of the 5x5 window
    assert tuple(obs[3:6]) == (2.0, 2.0, 1.0)


def test_sight_radius_window_coordinates():
    env = fresh_env(sight=2, n_food=1)
    place(env, agents=[(4, 4, 1), (3, 3, 2)], foods=[(5, 6, 2)])
    obs = env._observe(0)
    # window origin is (2, 2); food at (5,6) -> (3, 4), agent at (3,3) -> (1, 1)
    assert tuple(obs[0:3]) == (3.0, 4.0, 2.0)
    assert tuple(obs[6:9]) == (1.0, 1.0, 2.0)


def test_full_sight_uses_absolute_coordinates():
    env = fresh_env(n_food=1)
    place(env, agents=[(4, 4, 1), (0, 0, 1)], foods=[(7, 5, 2)])
    obs = env._observe(1)
    assert tuple(obs[0:3]) == (7.0, 5.0, 2.0)
    assert tuple(obs[3:6]) == (0.0, 0.0, 1.0)  # own triplet first
    assert tuple(obs[6:9]) == (4.0, 4.0, 1.0)


def test_solved_episode_returns_sum_to_one():
    """Scripted full collection on constructed levels: the appendix
    normalisation guarantees the per-agent returns of a solved episode sum
    to exactly 1."""
    env = fresh_env(n_food=2)
    place(env, agents=[(2, 2, 2), (4, 2, 1)], foods=[(3, 2, 3), (6, 2, 1)])
    total = 0.0
    res = env.step([PICKUP, PICKUP])  # joint load of the level-3 food
    total += res.team_reward
    env.agents[1].x, env.agents[1].y = 5, 2  # walk agent 1 next to the level-1 food
    res = env.step([NOOP, PICKUP])
    total += res.team_reward
    assert res.done
    assert total == pytest.approx(1.0, abs=1e-9)


@given(
    st.lists(st.integers(min_value=1, max_value=2), min_size=2, max_size=4),
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=10_000),
)
@settings(max_examples=40, deadline=None)
def test_reward_partition_sums_to_food_share(agent_levels, food_level, salt):
    """For any loader subset meeting the level condition, one food's
    reward split sums to food_level / sum_food_levels."""
    loaders = [lvl for lvl in agent_levels if lvl > 0]
    if sum(loaders) < food_level:
        loaders.append(food_level)
    sum_food = food_level + 3
    split = [lbf_reward(food_level, lvl, sum_food, sum(loaders)) for lvl in loaders]
    assert sum(split) == pytest.approx(food_level / sum_food, abs=1e-12)


def test_no_agent_overlap_under_random_play():
    env = make("Foraging-10x10-3p-3f-v1")
    rng = Rng(123)
    episode = 0
    env.reset(episode)
    for _ in range(10_000):
        res = env.step([rng.randrange(6) for _ in range(3)])
        cells = {(a.x, a.y) for a in env.agents}
        assert len(cells) == env.n_agents
        if res.done:
            episode += 1
            env.reset(episode)


def test_food_count_non_increasing_and_levels():
    env = make("Foraging-8x8-2p-2f-coop-v1")
    rng = Rng(9)
    for seed in range(5):
        env.reset(seed)
        agent_sum = sum(a.level for a in env.agents)
        # forced cooperation: every food needs the whole team
        assert all(f.level == agent_sum for f in env.foods)
        alive = sum(f.alive for f in env.foods)
        done = False
        while not done:
            res = env.step([rng.randrange(6), rng.randrange(6)])
            now = sum(f.alive for f in env.foods)
            assert now <= alive
            alive = now
            done = res.done


def test_spawn_invariants():
    env = make("Foraging-10x10-3p-3f-v1")
    for seed in range(30):
        env.reset(seed)
        agent_cells = {(a.x, a.y) for a in env.agents}
        assert len(agent_cells) == 3
        food_cells = [(f.x, f.y) for f in env.foods]
        assert len(set(food_cells)) == 3
        for cell in food_cells:
            assert cell not in agent_cells
        for i, a in enumerate(food_cells):
            for b in food_cells[i + 1 :]:
                assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) >= 2
        # non-coop food levels are collectable by the full team
        assert all(1 <= f.level <= min(sum(x.level for x in env.agents), 4) for f in env.foods)


def test_episode_return_bounded_and_one_iff_solved():
    env = make("Foraging-8x8-2p-2f-coop-v1")
    rng = Rng(2024)
    solved_seen = 0
    for seed in range(60):
        env.reset(seed)
        total, done = 0.0, False
        while not done:
            res = env.step([rng.randrange(6), rng.randrange(6)])
            total += res.team_reward
            done = res.done
        assert -1e-9 <= total <= 1.0 + 1e-9
        solved = all(not f.alive for f in env.foods)
        if solved:
            solved_seen += 1
            assert total == pytest.approx(1.0, abs=1e-9)
        else:
            assert total < 1.0 - 1e-9 or total == pytest.approx(1.0, abs=1e-9)


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        LbfConfig(x_size=4, y_size=4, n_agents=2, n_food=1).validate()
    with pytest.raises(ValueError):
        LbfConfig(x_size=8, y_size=8, n_agents=5, n_food=1, coop=True).validate()
    with pytest.raises(ValueError):
        LbfConfig(x_size=8, y_size=8, n_agents=2, n_food=11).validate()
