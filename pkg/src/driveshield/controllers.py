"""Robot controllers: a goal-greedy reference controller and a sampling MPC.

Both follow the same subgoal chain.  The greedy controller is deliberately
reckless (it never looks at the human); the cross-entropy planner trades
progress against a collision penalty computed on a constant-velocity forecast
of the human.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, cos, hypot, sin

import numpy as np

from . import _kernels
from .dynamics import Action, AgentState, JointState, Turn
from .params import AgentLimits, PhysicalParams


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def wrap_angle(ang: float) -> float:
    """Map any angle to (-pi, pi]."""
    return atan2(sin(ang), cos(ang))


class WaypointTracker:
    """Progress along a subgoal chain; advances when within arrival_radius."""

    def __init__(self, waypoints, arrival_radius: float = 2.0) -> None:
        if not waypoints:
            raise ValueError("waypoint chain must not be empty")
        self.waypoints = [(float(x), float(y)) for x, y in waypoints]
        self.arrival_radius = float(arrival_radius)
        self.idx = 0

    def current(self, s: AgentState) -> tuple[float, float]:
        # skip past every already-reached waypoint, but never past the last
        while self.idx < len(self.waypoints) - 1:
            wx, wy = self.waypoints[self.idx]
            if hypot(wx - s.x, wy - s.y) <= self.arrival_radius:
                self.idx += 1
            else:
                break
        return self.waypoints[self.idx]

    @property
    def at_final(self) -> bool:
        return self.idx == len(self.waypoints) - 1


def greedy_action(s: AgentState, wp: tuple[float, float], final: bool,
                  steer_gain: float, limits: AgentLimits) -> Action:
    """Proportional steering at the waypoint, full throttle otherwise.

    Brakes at full rate once the remaining distance to the *final* waypoint
    is within the stopping distance v^2 / (2 a_max).
    """
    err = wrap_angle(atan2(wp[1] - s.y, wp[0] - s.x) - s.theta)
    phi = clamp(steer_gain * err, -limits.phi_max, limits.phi_max)
    dist = hypot(wp[0] - s.x, wp[1] - s.y)
    if final and dist <= s.v * s.v / (2.0 * limits.a_max):
        a = -limits.a_max
    else:
        a = limits.a_max
    return Action(phi, a)


@dataclass(frozen=True)
class AggressiveConfig:
    steer_gain: float = 2.0
    arrival_radius: float = 2.0


class AggressiveController:
    """Memoryless goal chaser (apart from the waypoint index)."""

    def __init__(self, waypoints, limits: AgentLimits,
                 cfg: AggressiveConfig | None = None) -> None:
        self.cfg = cfg or AggressiveConfig()
        self.limits = limits
        self.tracker = WaypointTracker(waypoints, self.cfg.arrival_radius)

    def act(self, x: JointState) -> Action:
        if x.turn is not Turn.ROBOT:
            raise ValueError("controller acts on robot turns only")
        wp = self.tracker.current(x.robot)
        return greedy_action(x.robot, wp, self.tracker.at_final,
                             self.cfg.steer_gain, self.limits)


@dataclass(frozen=True)
class CemConfig:
    horizon: int = 30            # steps of tau
    population: int = 64
    elites: int = 8
    iterations: int = 4
    init_std: tuple[float, float] = (1.0, 0.3)  # (accel, steer) sampling std
    collision_penalty: float = 1e4
    progress_weight: float = 1.0
    track_weight: float = 0.5       # squared lateral deviation from the route leg
    collision_radius: float = 12.0  # forecast clearance treated as colliding
    wall_clear: float = 1.8         # wall distance treated as colliding
    arrival_radius: float = 2.0
    std_floor: float = 1e-3

    def __post_init__(self) -> None:
        if not (1 <= self.elites <= self.population):
            raise ValueError("need 1 <= elites <= population")
        if self.horizon < 1 or self.iterations < 1:
            raise ValueError("horizon and iterations must be positive")


class CemPlanner:
    """Cross-entropy MPC against a constant-velocity forecast of the human.

    Replans from scratch every robot turn; all randomness comes from the
    generator handed in, so plans are reproducible.
    """

    def __init__(self, waypoints, p: PhysicalParams, rng: np.random.Generator,
                 cfg: CemConfig | None = None, walls=()) -> None:
        self.cfg = cfg or CemConfig()
        self.p = p
        self.rng = rng
        self.tracker = WaypointTracker(waypoints, self.cfg.arrival_radius)
        self._route_start: tuple[float, float] | None = None
        segs = [(ax, ay, bx, by)
                for poly in walls
                for (ax, ay), (bx, by) in zip(poly, poly[1:])]
        self.walls = np.array(segs, dtype=np.float64).reshape(len(segs), 4)

    def act(self, x: JointState) -> Action:
        if x.turn is not Turn.ROBOT:
            raise ValueError("controller acts on robot turns only")
        cfg = self.cfg
        lim = self.p.robot
        wx, wy = self.tracker.current(x.robot)
        if self._route_start is None:
            self._route_start = (x.robot.x, x.robot.y)
        if self.tracker.idx == 0:
            px, py = self._route_start
        else:
            px, py = self.tracker.waypoints[self.tracker.idx - 1]
        rstate = np.array(x.robot.as_tuple(), dtype=np.float64)
        hstate = np.array(x.human.as_tuple(), dtype=np.float64)
        mean = np.zeros((cfg.horizon, 2), dtype=np.float64)
        std = np.empty((cfg.horizon, 2), dtype=np.float64)
        std[:, 0] = cfg.init_std[1]  # steering column
        std[:, 1] = cfg.init_std[0]  # acceleration column
        scores = np.empty(cfg.population, dtype=np.float64)
        for _ in range(cfg.iterations):
            eps = self.rng.standard_normal((cfg.population, cfg.horizon, 2))
            cand = mean[None, :, :] + eps * std[None, :, :]
            np.clip(cand[:, :, 0], -lim.phi_max, lim.phi_max, out=cand[:, :, 0])
            np.clip(cand[:, :, 1], -lim.a_max, lim.a_max, out=cand[:, :, 1])
            cand = np.ascontiguousarray(cand)
            _kernels.cem_scores(rstate, hstate, cand, self.p.tau, lim.v_max,
                                px, py, wx, wy, cfg.progress_weight,
                                cfg.track_weight, cfg.collision_penalty,
                                cfg.collision_radius, self.walls,
                                cfg.wall_clear, scores)
            elite_idx = np.argsort(-scores, kind="stable")[:cfg.elites]
            elite = cand[elite_idx]
            mean = elite.mean(axis=0)
            std = elite.std(axis=0) + cfg.std_floor
        return Action(clamp(float(mean[0, 0]), -lim.phi_max, lim.phi_max),
                      clamp(float(mean[0, 1]), -lim.a_max, lim.a_max))
