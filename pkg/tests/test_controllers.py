import math

import numpy as np
import pytest

from driveshield._kernels import cem_scores
from driveshield.controllers import (AggressiveController, CemConfig,
                                     CemPlanner, WaypointTracker, clamp,
                                     greedy_action, wrap_angle)
from driveshield.dynamics import Action, AgentState, JointState, Turn, step_agent
from driveshield.params import PhysicalParams


P = PhysicalParams()
FAR_HUMAN = AgentState(1000.0, 1000.0, 0.0, 0.0)


def test_helpers():
    assert clamp(5.0, -1.0, 1.0) == 1.0
    assert clamp(-5.0, -1.0, 1.0) == -1.0
    assert wrap_angle(math.pi + 0.1) == pytest.approx(-math.pi + 0.1)
    assert wrap_angle(-math.pi - 0.1) == pytest.approx(math.pi - 0.1)


def test_waypoint_tracker_advances_and_stops_at_last():
    tr = WaypointTracker(((5.0, 0.0), (10.0, 0.0)), arrival_radius=2.0)
    assert tr.current(AgentState(0, 0, 0, 0)) == (5.0, 0.0)
    assert not tr.at_final
    assert tr.current(AgentState(4.5, 0, 0, 0)) == (10.0, 0.0)
    assert tr.at_final
    # the final waypoint is sticky
    assert tr.current(AgentState(10.0, 0, 0, 0)) == (10.0, 0.0)
    with pytest.raises(ValueError):
        WaypointTracker(())


def test_greedy_action_brakes_inside_stopping_distance():
    lim = P.robot
    u = greedy_action(AgentState(0, 0, 5.0, 0.0), (3.0, 0.0), True, 2.0, lim)
    assert u.a == -lim.a_max          # 6.25 m needed to stop, 3 m remain
    u2 = greedy_action(AgentState(0, 0, 5.0, 0.0), (30.0, 0.0), True, 2.0, lim)
    assert u2.a == lim.a_max


def test_aggressive_controller_reaches_goal_on_empty_road():
    ctl = AggressiveController(((24.0, 0.0),), P.robot)
    s = AgentState(-36.0, 0.0, 0.0, 0.0)
    for _ in range(400):
        u = ctl.act(JointState(s, FAR_HUMAN, Turn.ROBOT))
        s = step_agent(s, u, P.robot, P.tau)
        if (s.x - 24.0) ** 2 + s.y ** 2 <= 4.0:
            break
    else:
        pytest.fail(f"never reached the goal, ended at {s}")


def _plan(seed: int, human: AgentState) -> Action:
    rng = np.random.default_rng(seed)
    planner = CemPlanner(((30.0, 0.0),), P, rng)
    return planner.act(JointState(AgentState(0, 0, 2.0, 0.0), human, Turn.ROBOT))


def test_cem_plan_is_deterministic_in_the_rng():
    assert _plan(7, FAR_HUMAN) == _plan(7, FAR_HUMAN)
    assert _plan(7, FAR_HUMAN) != _plan(8, FAR_HUMAN)


def test_cem_accelerates_on_empty_road():
    u = _plan(3, FAR_HUMAN)
    assert u.a > 0.5


def test_cem_brakes_for_oncoming_traffic():
    u = _plan(7, AgentState(12.0, 0.0, 3.0, math.pi))
    assert u.a < 0.0


def test_cem_action_respects_bounds():
    for seed in range(5):
        u = _plan(seed, AgentState(15.0, 2.0, 2.0, math.pi))
        assert abs(u.phi) <= P.robot.phi_max + 1e-12
        assert -P.robot.a_max - 1e-12 <= u.a <= P.robot.a_max + 1e-12


def _score(acts: np.ndarray, human: AgentState, walls: np.ndarray,
           radius: float = 2.0, penalty: float = 1e4) -> np.ndarray:
    out = np.empty(acts.shape[0], dtype=np.float64)
    cem_scores(np.array([0.0, 0.0, 2.0, 0.0]),
               np.array([human.x, human.y, human.v, human.theta]),
               acts, P.tau, P.robot.v_max,
               -20.0, 0.0, 20.0, 0.0,      # route leg along y=0
               1.0, 0.5, penalty, radius, walls, 1.8, out)
    return out


NO_WALLS = np.empty((0, 4), dtype=np.float64)


def test_cem_score_penalty_is_flat_with_depth_tiebreak():
    h = 20
    brake = np.zeros((1, h, 2))
    brake[0, :, 1] = -1.0             # stops ~1.9 m in, clear of the disk
    coast = np.zeros((1, h, 2))       # drifts to x=4, grazing the disk
    rush = np.zeros((1, h, 2))
    rush[0, :, 1] = 2.0               # punches straight through the disk
    acts = np.concatenate([brake, coast, rush])
    human = AgentState(5.0, 0.0, 0.0, 0.0)
    s = _score(acts, human, NO_WALLS, radius=2.0, penalty=1e4)
    assert s[0] > s[1] > s[2]
    # one flat penalty separates clean from violating plans
    assert s[0] - s[1] > 0.9e4
    # among violators only the small depth term differs
    assert 0.0 < s[1] - s[2] < 0.2e4


def test_cem_score_wall_clearance():
    h = 20
    brake = np.zeros((1, h, 2))
    brake[0, :, 1] = -1.0
    coast = np.zeros((1, h, 2))       # ends 1 m from the wall, inside 1.8 band
    acts = np.concatenate([brake, coast])
    wall = np.array([[5.0, -5.0, 5.0, 5.0]])
    s = _score(acts, FAR_HUMAN, wall)
    assert s[0] > s[1]
    assert s[0] - s[1] > 0.9e4


def test_cem_score_rewards_progress_when_clean():
    h = 10
    slow = np.zeros((1, h, 2))
    fast = np.zeros((1, h, 2))
    fast[0, :, 1] = 1.0
    s = _score(np.concatenate([slow, fast]), FAR_HUMAN, NO_WALLS)
    assert s[1] > s[0]


def test_cem_config_defaults_are_frozen():
    cfg = CemConfig()
    assert (cfg.horizon, cfg.population, cfg.elites, cfg.iterations) == (30, 64, 8, 4)
    assert cfg.collision_radius == 12.0
    assert cfg.wall_clear == 1.8
    assert cfg.track_weight == 0.5
    assert cfg.collision_penalty == 1e4
