"""Joint turn-based vehicle dynamics and the two safety predicates.

Each agent is a kinematic car ``(x, y, v, theta)`` driven by ``(phi, a)``:
positions and heading advance with the pre-step speed, then speed updates and
clamps to ``[0, v_max]``.  Agents alternate moves; a full round is one robot
move followed by one human move.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from math import hypot

from . import _kernels
from .params import AgentLimits, PhysicalParams


class Turn(Enum):
    ROBOT = "robot"
    HUMAN = "human"


class SafetyMode(Enum):
    """Which states count as collisions."""

    CENTER_DISTANCE = "center_distance"    # centers closer than d_safe
    RECTANGLE_OVERLAP = "rectangle_overlap"  # oriented body rectangles intersect


class ActionBoundsError(ValueError):
    """An action exceeded the acting agent's actuation bounds."""


@dataclass(frozen=True)
class AgentState:
    x: float
    y: float
    v: float
    theta: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.v, self.theta)


@dataclass(frozen=True)
class Action:
    phi: float  # steering, rad
    a: float    # acceleration, m/s^2

    def as_tuple(self) -> tuple[float, float]:
        return (self.phi, self.a)


@dataclass(frozen=True)
class JointState:
    robot: AgentState
    human: AgentState
    turn: Turn

    def as_array(self) -> tuple[float, ...]:
        return self.robot.as_tuple() + self.human.as_tuple()


def check_action(u: Action, limits: AgentLimits) -> None:
    """Reject out-of-bounds actions; callers are expected to clamp first."""
    if abs(u.phi) > limits.phi_max:
        raise ActionBoundsError(f"steering {u.phi!r} exceeds |phi| <= {limits.phi_max!r}")
    if abs(u.a) > limits.a_max:
        raise ActionBoundsError(f"acceleration {u.a!r} exceeds |a| <= {limits.a_max!r}")


def step_agent(s: AgentState, u: Action, limits: AgentLimits, tau: float) -> AgentState:
    """One agent move.  Raises ActionBoundsError on out-of-bounds input."""
    check_action(u, limits)
    x, y, v, th = _kernels.step_agent(s.x, s.y, s.v, s.theta, u.phi, u.a, tau, limits.v_max)
    return AgentState(x, y, v, th)


def step_joint(x: JointState, u: Action, p: PhysicalParams) -> JointState:
    """Move the agent whose turn it is and hand the turn to the other agent."""
    if x.turn is Turn.ROBOT:
        nxt = step_agent(x.robot, u, p.robot, p.tau)
        return JointState(robot=nxt, human=x.human, turn=Turn.HUMAN)
    nxt = step_agent(x.human, u, p.human, p.tau)
    return JointState(robot=x.robot, human=nxt, turn=Turn.ROBOT)


def center_distance(x: JointState) -> float:
    return hypot(x.human.x - x.robot.x, x.human.y - x.robot.y)


def bodies_overlap(x: JointState, p: PhysicalParams) -> bool:
    """Strict interior intersection of the two body rectangles."""
    return _kernels.rect_overlap(
        x.robot.x, x.robot.y, x.robot.theta, p.robot.body_length, p.robot.body_width,
        x.human.x, x.human.y, x.human.theta, p.human.body_length, p.human.body_width,
    )


def is_safe(x: JointState, p: PhysicalParams,
            mode: SafetyMode = SafetyMode.RECTANGLE_OVERLAP) -> bool:
    if mode is SafetyMode.CENTER_DISTANCE:
        return center_distance(x) >= p.d_safe
    return not bodies_overlap(x, p)


def with_turn(x: JointState, turn: Turn) -> JointState:
    return replace(x, turn=turn)
