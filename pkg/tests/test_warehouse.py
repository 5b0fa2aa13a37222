import itertools

import numpy as np
import pytest
from scipy import stats

from marlbench.envs import make
from marlbench.envs.warehouse import (
    DOWN,
    FORWARD,
    LEFT,
    RIGHT,
    TOGGLE_LOAD,
    TURN_LEFT,
    TURN_RIGHT,
    UP,
    WarehouseEnv,
    WarehouseLayout,
    request_queue_size,
    resolve_collisions,
)
from marlbench.rng import Rng


# -- layout ------------------------------------------------------------------


def test_layout_partition_and_goals():
    for size, (rows, cols) in (("tiny", (1, 3)), ("small", (2, 3)), ("medium", (2, 5)), ("large", (3, 5))):
        layout = WarehouseLayout.from_size(size)
        assert (layout.group_rows, layout.group_cols) == (rows, cols)
        storage = layout.storage_cells()
        assert len(storage) == 16 * rows * cols  # 8x2 shelves per group
        for x in range(layout.width):
            for y in range(layout.height):
                assert layout.is_storage(x, y) != layout.is_highway(x, y)
        for gx, gy in layout.goal_cells():
            assert gy == layout.height - 1
            assert layout.is_highway(gx, gy)


def test_request_queue_sizing():
    assert request_queue_size(4, None) == 4
    assert request_queue_size(4, "easy") == 8
    assert request_queue_size(4, "hard") == 2
    assert request_queue_size(1, "hard") == 1
    env = make("rware-tiny-4ag-v1")
    env.reset(0)
    assert len(env.requested_ids) == 4


# -- collision resolution -------------------------------------------------------


def oracle_moves(positions, targets):
    """Independent oracle: per-cell winners by the stated priority, then
    the unique maximum feasible mover subset by exhaustive enumeration."""
    n = len(positions)
    wants = [targets[i] != positions[i] for i in range(n)]
    claims = {}
    for i in range(n):
        if wants[i]:
            claims.setdefault(targets[i], []).append(i)
    winners = set()
    for cell, claimants in claims.items():
        blocking = [
            c for c in claimants
            if any(j != c and wants[j] and targets[j] == positions[c] for j in range(n))
        ]
        winners.add(min(blocking) if blocking else min(claimants))

    def feasible(subset):
        occupied_after = set()
        for i in range(n):
            pos = targets[i] if i in subset else positions[i]
            if pos in occupied_after:
                return False
            occupied_after.add(pos)
        for i in subset:
            occupant = next((j for j in range(n) if positions[j] == targets[i]), None)
            if occupant is not None and occupant not in subset:
                return False
            if occupant is not None and occupant in subset and targets[occupant] == positions[i]:
                return False  # 2-cycle
        return True

    best = set()
    for r in range(len(winners), -1, -1):
        for subset in itertools.combinations(sorted(winners), r):
            if feasible(set(subset)):
                return [i in set(subset) for i in range(n)]
    return [False] * n


def test_chain_all_move():
    positions = [(0, 0), (1, 0), (2, 0)]
    targets = [(1, 0), (2, 0), (3, 0)]
    assert resolve_collisions(positions, targets) == [True, True, True]


def test_contested_free_cell_lowest_index_wins():
    positions = [(0, 0), (2, 0)]
    targets = [(1, 0), (1, 0)]
    assert resolve_collisions(positions, targets) == [True, False]


def test_head_on_swap_rejected():
    positions = [(0, 0), (1, 0)]
    targets = [(1, 0), (0, 0)]
    assert resolve_collisions(positions, targets) == [False, False]


def test_blocking_claimant_wins_over_lower_index():
    # robots 0 and 1 contest (1,1); robot 2 wants robot 1's cell, so 1 is
    # prioritised despite its higher index
    positions = [(0, 1), (1, 0), (1, -1)]
    targets = [(1, 1), (1, 1), (1, 0)]
    moves = resolve_collisions(positions, targets)
    assert moves == [False, True, True]


def test_rotation_cycle_moves():
    positions = [(0, 0), (1, 0), (1, 1)]
    targets = [(1, 0), (1, 1), (0, 0)]
    assert resolve_collisions(positions, targets) == [True, True, True]


def test_chain_into_stationary_robot_stalls():
    positions = [(0, 0), (1, 0), (2, 0)]
    targets = [(1, 0), (2, 0), (2, 0)]  # robot 2 stays
    assert resolve_collisions(positions, targets) == [False, False, False]


def test_collisions_match_oracle_on_random_configurations():
    rng = Rng(77)
    for trial in range(300):
        n = 2 + rng.randrange(5)
        cells = [(x, y) for x in range(4) for y in range(4)]
        positions = [cells[i] for i in rng.sample(range(len(cells)), n)]
        targets = []
        for i in range(n):
            if rng.random() < 0.3:
                targets.append(positions[i])
            else:
                dx, dy = [(0, 1), (0, -1), (1, 0), (-1, 0)][rng.randrange(4)]
                targets.append((positions[i][0] + dx, positions[i][1] + dy))
        assert resolve_collisions(positions, targets) == oracle_moves(positions, targets), (
            positions,
            targets,
        )


# -- dynamics ------------------------------------------------------------------


def fresh_env(n_agents=2) -> WarehouseEnv:
    env = WarehouseEnv("tiny", n_agents)
    env.reset(3)
    return env


def set_robot(env, i, x, y, heading, carrying=None):
    env.robots[i].x, env.robots[i].y = x, y
    env.robots[i].heading = heading
    env.robots[i].carrying = carrying
    if carrying is not None:
        env.shelves[carrying].carried_by = i
        env.shelves[carrying].x, env.shelves[carrying].y = x, y


def test_turns_rotate_headings():
    env = fresh_env()
    set_robot(env, 0, 0, 0, UP)
    set_robot(env, 1, 9, 0, UP)
    env.step([TURN_LEFT, TURN_RIGHT])
    assert env.robots[0].heading == LEFT
    assert env.robots[1].heading == RIGHT
    env.step([TURN_LEFT, TURN_RIGHT])
    assert env.robots[0].heading == DOWN
    assert env.robots[1].heading == DOWN


def test_all_turns_give_zero_reward():
    env = fresh_env()
    for _ in range(50):
        res = env.step([TURN_LEFT, TURN_LEFT])
        assert res.rewards == [0.0, 0.0]
    assert env.deliveries == 0


def test_load_on_empty_cell_is_noop():
    env = fresh_env()
    set_robot(env, 0, 0, 0, DOWN)  # highway corner, no shelf
    set_robot(env, 1, 9, 0, DOWN)
    res = env.step([TOGGLE_LOAD, TOGGLE_LOAD])
    assert env.robots[0].carrying is None
    assert res.rewards == [0.0, 0.0]


def test_load_unload_cycle():
    env = fresh_env()
    shelf = next(i for i, s in enumerate(env.shelves) if s.carried_by is None)
    sx, sy = env.shelves[shelf].x, env.shelves[shelf].y
    set_robot(env, 0, sx, sy, UP)
    set_robot(env, 1, 0, 0, UP)
    env.step([TOGGLE_LOAD, TURN_LEFT])
    assert env.robots[0].carrying == shelf
    # unload back onto the same (now empty) storage cell
    env.step([TOGGLE_LOAD, TURN_LEFT])
    assert env.robots[0].carrying is None
    assert (env.shelves[shelf].x, env.shelves[shelf].y) == (sx, sy)


def test_unload_on_highway_is_noop():
    env = fresh_env()
    shelf = 0
    set_robot(env, 0, 0, 1, UP, carrying=shelf)
    set_robot(env, 1, 9, 9, UP)
    env.step([TOGGLE_LOAD, TURN_LEFT])
    assert env.robots[0].carrying == shelf  # (0,1) is a highway cell


def test_laden_robot_blocked_by_stored_shelf():
    env = fresh_env()
    target = next(i for i, s in enumerate(env.shelves) if s.carried_by is None)
    tx, ty = env.shelves[target].x, env.shelves[target].y
    carried = next(i for i in range(len(env.shelves)) if i != target)
    set_robot(env, 0, tx, ty + 1, UP, carrying=carried)  # facing the stored shelf
    set_robot(env, 1, 0, 0, DOWN)
    env.step([FORWARD, TURN_LEFT])
    assert (env.robots[0].x, env.robots[0].y) == (tx, ty + 1)  # blocked


def test_unladen_robot_passes_under_stored_shelf():
    env = fresh_env()
    target = next(i for i, s in enumerate(env.shelves) if s.carried_by is None)
    tx, ty = env.shelves[target].x, env.shelves[target].y
    set_robot(env, 0, tx, ty + 1, UP)
    set_robot(env, 1, 0, 0, DOWN)
    env.step([FORWARD, TURN_LEFT])
    assert (env.robots[0].x, env.robots[0].y) == (tx, ty)


def test_delivery_scores_once_and_resamples_request():
    env = fresh_env()
    goal = env.layout.goal_cells()[0]
    shelf = next(iter(env.requested_ids))
    set_robot(env, 0, goal[0], goal[1] - 1, DOWN, carrying=shelf)
    set_robot(env, 1, 0, 0, UP)
    before = env.requested_ids
    res = env.step([FORWARD, TURN_LEFT])
    assert (env.robots[0].x, env.robots[0].y) == goal
    assert res.team_reward == pytest.approx(1.0)
    assert res.rewards == pytest.approx([0.5, 0.5])  # identical split
    assert env.deliveries == 1
    assert res.info["deliveries"] == 1
    after = env.requested_ids
    assert len(after) == len(before)  # queue size restored
    assert shelf not in after
    # standing on the goal afterwards scores nothing
    res2 = env.step([TURN_LEFT, TURN_LEFT])
    assert res2.team_reward == 0.0


def test_delivery_requires_requested_shelf():
    env = fresh_env()
    goal = env.layout.goal_cells()[0]
    shelf = next(i for i in range(len(env.shelves)) if i not in env.requested_ids)
    set_robot(env, 0, goal[0], goal[1] - 1, DOWN, carrying=shelf)
    set_robot(env, 1, 0, 0, UP)
    res = env.step([FORWARD, TURN_LEFT])
    assert res.team_reward == 0.0
    assert env.deliveries == 0


def test_observation_is_71_with_documented_field_order():
    env = fresh_env()
    set_robot(env, 0, 8, 3, DOWN)
    set_robot(env, 1, 8, 4, RIGHT)  # directly below robot 0
    obs = env._observe(0)
    assert obs.shape == (71,)
    assert tuple(obs[:3]) == (8.0, 3.0, 0.0)  # x, y, carrying
    assert tuple(obs[3:7]) == (0.0, 1.0, 0.0, 0.0)  # heading one-hot (down)
    assert obs[7] == 0.0  # x=8,y=3 is a storage cell, not highway
    # 3x3 window in row-major order; robot 1 sits at relative (dx=0, dy=+1),
    # which is cell index 7, so its group starts at 8 + 7*7
    group = obs[8 + 7 * 7 : 8 + 8 * 7]
    assert group[0] == 1.0
    assert tuple(group[1:5]) == (0.0, 0.0, 0.0, 1.0)  # facing right
    # that storage cell still holds its shelf
    assert group[5] == 1.0


def test_lone_robot_window_only_shows_own_shelf_bits():
    env = fresh_env()
    set_robot(env, 0, 4, 2, UP)
    set_robot(env, 1, 0, 9, UP)  # far away
    keep = next(i for i, s in enumerate(env.shelves) if (s.x, s.y) == (4, 2))
    env.shelves = [env.shelves[keep]]
    env._request_rng = Rng(0)
    env.shelves[0].requested = True
    obs = env._observe(0)
    window = obs[8:].reshape(9, 7)
    own = window[4]  # centre cell
    assert own[5] == 1.0 and own[6] == 1.0  # shelf present and requested
    assert own[0] == 0.0  # the observer itself is not an "agent present"
    others = np.delete(window, 4, axis=0)
    assert not others.any()


def test_carrying_bit_and_highway_flag():
    env = fresh_env()
    set_robot(env, 0, 0, 0, UP, carrying=0)
    set_robot(env, 1, 9, 9, UP)
    obs = env._observe(0)
    assert obs[2] == 1.0
    assert obs[7] == 1.0  # (0,0) is highway


def test_request_sampling_uniform_chi_square():
    env = fresh_env()
    # leave exactly 5 unrequested candidates
    for i, s in enumerate(env.shelves):
        s.requested = i >= 5
    counts = np.zeros(5)
    env._request_rng = Rng(99)
    for _ in range(10_000):
        pick = env.sample_new_request()
        counts[pick] += 1
        env.shelves[pick].requested = False  # restore the candidate set
    _, p = stats.chisquare(counts)
    assert p > 0.01


def test_forced_request_sampling_single_candidate():
    env = fresh_env()
    for i, s in enumerate(env.shelves):
        s.requested = i != 17
    assert env.sample_new_request() == 17


def test_queue_size_constant_under_random_play():
    env = make("rware-tiny-2ag-v1")
    rng = Rng(5)
    episode = 0
    env.reset(episode)
    r = len(env.requested_ids)
    for _ in range(3_000):
        res = env.step([rng.randrange(4), rng.randrange(4)])
        assert len(env.requested_ids) == r
        if res.done:
            episode += 1
            env.reset(episode)


def test_no_robot_overlap_under_random_play():
    env = make("rware-tiny-4ag-v1")
    rng = Rng(8)
    episode = 0
    env.reset(episode)
    for _ in range(10_000):
        res = env.step([rng.randrange(4) for _ in range(4)])
        cells = {(r.x, r.y) for r in env.robots}
        assert len(cells) == 4
        if res.done:
            episode += 1
            env.reset(episode)


def test_cumulative_team_reward_equals_deliveries():
    env = make("rware-tiny-2ag-v1")
    rng = Rng(31)
    total = 0.0
    episode = 0
    env.reset(episode)
    deliveries = 0
    for _ in range(2_000):
        res = env.step([rng.randrange(4), rng.randrange(4)])
        total += res.team_reward
        if res.done:
            deliveries += env.deliveries
            episode += 1
            env.reset(episode)
    deliveries += env.deliveries
    assert total == pytest.approx(deliveries)


def test_episode_terminates_at_500_steps():
    env = make("rware-tiny-2ag-v1")
    rng = Rng(1)
    env.reset(0)
    for t in range(500):
        res = env.step([rng.randrange(4), rng.randrange(4)])
    assert res.done
    assert res.info["episode_steps"] == 500
