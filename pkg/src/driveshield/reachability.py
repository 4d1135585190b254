"""Interval boxes over joint states and their one-round abstract image.

The abstract transformer is deliberately coarse: position intervals grow by
the speed bound regardless of heading, heading grows by the worst steering
magnitude, and only the speed interval is shifted by the acceleration box.
That coarseness is what makes the image sound for every concrete state and
action selection inside the boxes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dynamics import Action, AgentState, JointState
from .params import PhysicalParams


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(v, v)

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class AgentBox:
    x: Interval
    y: Interval
    v: Interval
    theta: Interval

    @classmethod
    def from_state(cls, s: AgentState) -> "AgentBox":
        return cls(Interval.point(s.x), Interval.point(s.y),
                   Interval.point(s.v), Interval.point(s.theta))

    def contains(self, s: AgentState) -> bool:
        return (self.x.contains(s.x) and self.y.contains(s.y)
                and self.v.contains(s.v) and self.theta.contains(s.theta))

    @property
    def midpoint(self) -> AgentState:
        return AgentState(self.x.midpoint, self.y.midpoint,
                          self.v.midpoint, self.theta.midpoint)


@dataclass(frozen=True)
class ActionBox:
    """Axis-aligned box of actions; layout [phi_lo, phi_hi, a_lo, a_hi]."""

    phi: Interval
    a: Interval

    @classmethod
    def singleton(cls, u: Action) -> "ActionBox":
        return cls(Interval.point(u.phi), Interval.point(u.a))

    def contains(self, u: Action) -> bool:
        return self.phi.contains(u.phi) and self.a.contains(u.a)

    def as_array(self) -> np.ndarray:
        return np.array([self.phi.lo, self.phi.hi, self.a.lo, self.a.hi], dtype=np.float64)


@dataclass(frozen=True)
class StateBox:
    """Interval box over the eight continuous joint-state dimensions."""

    robot: AgentBox
    human: AgentBox

    @classmethod
    def from_state(cls, x: JointState) -> "StateBox":
        return cls(AgentBox.from_state(x.robot), AgentBox.from_state(x.human))

    def contains(self, x: JointState) -> bool:
        return self.robot.contains(x.robot) and self.human.contains(x.human)

    def as_array(self) -> np.ndarray:
        r, h = self.robot, self.human
        return np.array([
            r.x.lo, r.x.hi, r.y.lo, r.y.hi, r.v.lo, r.v.hi, r.theta.lo, r.theta.hi,
            h.x.lo, h.x.hi, h.y.lo, h.y.hi, h.v.lo, h.v.hi, h.theta.lo, h.theta.hi,
        ], dtype=np.float64)

    @classmethod
    def from_array(cls, b: np.ndarray) -> "StateBox":
        def agent(o: int) -> AgentBox:
            return AgentBox(Interval(b[o], b[o + 1]), Interval(b[o + 2], b[o + 3]),
                            Interval(b[o + 4], b[o + 5]), Interval(b[o + 6], b[o + 7]))
        return cls(agent(0), agent(8))


def abstract_step(box: StateBox, u_r: ActionBox, u_h: ActionBox,
                  p: PhysicalParams) -> StateBox:
    """Sound overapproximation of one full round from anywhere in the box."""
    out = np.empty(16, dtype=np.float64)
    _kernels.abstract_step(box.as_array(), u_r.as_array(), u_h.as_array(),
                           p.tau, p.robot.v_max, p.human.v_max, out)
    return StateBox.from_array(out)


def box_min_center_dist(box: StateBox) -> float:
    """Smallest center distance realizable by any pair of positions in the box."""
    return _kernels.box_min_center_dist(box.as_array())


def box_is_safe(box: StateBox, p: PhysicalParams) -> bool:
    """Conservative: every state in the box is safe under both safety models."""
    return box_min_center_dist(box) >= p.safe_box_distance


def box_is_equilibrium(box: StateBox, p: PhysicalParams) -> bool:
    """Safe and both speed intervals exactly [0, 0]: frozen forever."""
    return (box_is_safe(box, p)
            and box.robot.v.lo == 0.0 and box.robot.v.hi == 0.0
            and box.human.v.lo == 0.0 and box.human.v.hi == 0.0)
