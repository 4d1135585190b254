import math

import numpy as np
import pytest

import props
from driveshield.dynamics import (Action, ActionBoundsError, AgentState,
                                  JointState, SafetyMode, Turn, bodies_overlap,
                                  center_distance, check_action, is_safe,
                                  step_agent, step_joint, with_turn)
from driveshield.params import AgentLimits, PhysicalParams


P = PhysicalParams()


def test_step_agent_known_values():
    # hand-computed: x += v cos(theta) tau with the pre-step speed, then
    # theta += v phi tau, and v updates last
    s = AgentState(0.0, 0.0, 2.0, math.pi / 4)
    s2 = step_agent(s, Action(phi=0.1, a=0.5), AgentLimits(), 0.1)
    assert s2.x == pytest.approx(0.14142135623730953, abs=0, rel=0)
    assert s2.y == pytest.approx(0.1414213562373095, abs=0, rel=0)
    assert s2.v == 2.05
    assert s2.theta == pytest.approx(0.8053981633974483, abs=0, rel=0)


def test_step_uses_prestep_speed():
    s = AgentState(0.0, 0.0, 0.0, 0.0)
    s2 = step_agent(s, Action(0.0, 2.0), AgentLimits(), 0.1)
    # accelerating from rest gains speed but moves nowhere this step
    assert (s2.x, s2.y) == (0.0, 0.0)
    assert s2.v == pytest.approx(0.2)


def test_velocity_clamps_at_bounds():
    lim = AgentLimits()
    fast = AgentState(0, 0, lim.v_max, 0)
    assert step_agent(fast, Action(0, lim.a_max), lim, 0.1).v == lim.v_max
    slow = AgentState(0, 0, 0.05, 0)
    assert step_agent(slow, Action(0, -lim.a_max), lim, 0.1).v == 0.0


def test_check_action_rejects_out_of_bounds():
    lim = AgentLimits()
    check_action(Action(lim.phi_max, -lim.a_max), lim)
    with pytest.raises(ActionBoundsError):
        check_action(Action(lim.phi_max + 1e-6, 0.0), lim)
    with pytest.raises(ActionBoundsError):
        check_action(Action(0.0, lim.a_max + 1e-6), lim)


def test_step_joint_moves_only_turn_agent():
    x = JointState(AgentState(0, 0, 2, 0), AgentState(10, 0, 2, math.pi),
                   Turn.ROBOT)
    x2 = step_joint(x, Action(0.0, 0.0), P)
    assert x2.robot.x == pytest.approx(0.2)
    assert x2.human == x.human
    assert x2.turn is Turn.HUMAN
    x3 = step_joint(x2, Action(0.0, 0.0), P)
    assert x3.human.x == pytest.approx(9.8)
    assert x3.robot == x2.robot
    assert x3.turn is Turn.ROBOT


def test_with_turn_replaces_marker_only():
    x = JointState(AgentState(0, 0, 1, 0), AgentState(5, 5, 1, 0), Turn.ROBOT)
    y = with_turn(x, Turn.HUMAN)
    assert y.turn is Turn.HUMAN and y.robot == x.robot and y.human == x.human


def test_center_distance():
    x = JointState(AgentState(0, 0, 0, 0), AgentState(3, 4, 0, 0), Turn.ROBOT)
    assert center_distance(x) == pytest.approx(5.0)


# oracle cases cross-checked against an exact polygon intersection
@pytest.mark.parametrize("hx,hy,htheta,expect", [
    (1.5, 0.0, 0.0, True),     # aligned 2.0 x 1.0 bodies, centers 1.5 m apart
    (2.1, 0.0, 0.0, False),    # just past touching
    (1.4, 0.0, math.pi / 2, True),   # perpendicular crossing
])
def test_bodies_overlap_oracle(hx, hy, htheta, expect):
    x = JointState(AgentState(0, 0, 0, 0), AgentState(hx, hy, 0, htheta),
                   Turn.ROBOT)
    assert bodies_overlap(x, P) is expect


def test_is_safe_modes():
    near = JointState(AgentState(0, 0, 0, 0), AgentState(0.9, 0, 0, 0),
                      Turn.ROBOT)
    assert not is_safe(near, P, SafetyMode.CENTER_DISTANCE)
    assert not is_safe(near, P, SafetyMode.RECTANGLE_OVERLAP)
    apart = JointState(AgentState(0, 0, 0, 0), AgentState(2.5, 0, 0, 0),
                       Turn.ROBOT)
    assert is_safe(apart, P, SafetyMode.RECTANGLE_OVERLAP)


def test_property_velocity_clamp():
    assert props.velocity_clamp(10_000, np.random.default_rng(1), P) == 0


def test_property_rest_fixpoint():
    assert props.rest_fixpoint(10_000, np.random.default_rng(2), P) == 0


def test_property_turn_commutation():
    assert props.turn_commutation(10_000, np.random.default_rng(3), P) == 0
