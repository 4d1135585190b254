"""Human driver models: social forces, a certifying adversary, remote keys."""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import atan2, cos, exp, hypot, sin

import numpy as np

from . import _kernels
from .controllers import clamp, greedy_action
from .dynamics import (Action, JointState, SafetyMode, Turn, is_safe, step_joint)
from .params import PhysicalParams
from .shield import BackupSpec


@dataclass(frozen=True)
class SocialForceConfig:
    desired_speed: float = 3.0    # m/s cruise target
    goal_gain: float = 2.0        # pull toward the desired velocity
    agent_strength: float = 5.0   # repulsion from the robot
    agent_range: float = 3.0      # m, repulsion decay length
    wall_strength: float = 3.0
    wall_range: float = 1.0       # m
    noise_strength: float = 1.2   # fluctuation force std per turn
    max_force: float = 5.0        # total force clip

    def jittered(self, rng: np.random.Generator) -> "SocialForceConfig":
        """Per-run driver variation; this is where batch seeds enter."""
        return replace(
            self,
            desired_speed=self.desired_speed * rng.uniform(0.85, 1.15),
            goal_gain=self.goal_gain * rng.uniform(0.8, 1.2),
            agent_strength=self.agent_strength * rng.uniform(0.5, 1.2),
            noise_strength=self.noise_strength * rng.uniform(0.3, 1.7),
        )


def _closest_on_segment(px, py, ax, ay, bx, by):
    vx = bx - ax
    vy = by - ay
    denom = vx * vx + vy * vy
    if denom <= 0.0:
        return ax, ay
    t = ((px - ax) * vx + (py - ay) * vy) / denom
    t = clamp(t, 0.0, 1.0)
    return ax + t * vx, ay + t * vy


class SocialForceDriver:
    """Goal attraction plus exponential repulsion from the robot and walls.

    The planar force is projected onto the car frame: the longitudinal
    component becomes acceleration, the lateral one a bounded steering angle.
    A seeded fluctuation force models driver inattention, so two runs with
    the same generator state reproduce the same trajectory.
    """

    def __init__(self, cfg: SocialForceConfig, goal: tuple[float, float, float],
                 walls, p: PhysicalParams,
                 rng: np.random.Generator | None = None) -> None:
        self.cfg = cfg
        self.goal = goal  # (x, y, radius)
        self.walls = [[(float(x), float(y)) for x, y in poly] for poly in walls]
        self.p = p
        self.rng = rng or np.random.default_rng(0)

    def act(self, x: JointState) -> Action:
        if x.turn is not Turn.HUMAN:
            raise ValueError("human driver acts on human turns only")
        cfg = self.cfg
        h = x.human
        r = x.robot
        ct = cos(h.theta)
        st = sin(h.theta)

        gx, gy, grad = self.goal
        dx = gx - h.x
        dy = gy - h.y
        dist = hypot(dx, dy)
        if dist > grad:
            vdx = cfg.desired_speed * dx / dist
            vdy = cfg.desired_speed * dy / dist
        else:
            vdx = vdy = 0.0  # inside the goal: desire to stop
        fx = cfg.goal_gain * (vdx - h.v * ct)
        fy = cfg.goal_gain * (vdy - h.v * st)

        ddx = h.x - r.x
        ddy = h.y - r.y
        d = hypot(ddx, ddy)
        if d > 1e-9:
            contact = self.p.robot.circumradius + self.p.human.circumradius
            mag = cfg.agent_strength * exp((contact - d) / cfg.agent_range)
            fx += mag * ddx / d
            fy += mag * ddy / d

        half_w = self.p.human.body_width / 2.0
        for poly in self.walls:
            for (ax, ay), (bx, by) in zip(poly, poly[1:]):
                cxp, cyp = _closest_on_segment(h.x, h.y, ax, ay, bx, by)
                ddx = h.x - cxp
                ddy = h.y - cyp
                d = hypot(ddx, ddy)
                if d > 1e-9:
                    mag = cfg.wall_strength * exp((half_w - d) / cfg.wall_range)
                    fx += mag * ddx / d
                    fy += mag * ddy / d

        if cfg.noise_strength > 0.0:
            fx += cfg.noise_strength * self.rng.standard_normal()
            fy += cfg.noise_strength * self.rng.standard_normal()

        fmag = hypot(fx, fy)
        if fmag > cfg.max_force:
            fx *= cfg.max_force / fmag
            fy *= cfg.max_force / fmag

        along = fx * ct + fy * st
        lateral = -fx * st + fy * ct
        lim = self.p.human
        a = clamp(along, -lim.a_max, lim.a_max)
        phi = clamp(atan2(lateral, max(h.v, 1.0)), -lim.phi_max, lim.phi_max)
        return Action(phi, a)


@dataclass(frozen=True)
class AdversaryConfig:
    base: str = "random"      # "random" | "goal"
    certify: bool = True      # the ablation switch
    steer_gain: float = 2.0   # goal-seeking base only


class CompliantAdversary:
    """Plays its base policy only when a sampled backup continuation is safe.

    Before committing to a base action the adversary simulates it followed by
    backup-only behavior (itself sampling from the human backup set, the robot
    assumed to play its backup rule) for the certification horizon.  A safe,
    at-rest witness justifies the action; otherwise it plays a fresh sample
    from the backup set.  With ``certify=False`` it is exactly its base policy.
    """

    def __init__(self, cfg: AdversaryConfig, spec: BackupSpec,
                 goal: tuple[float, float] | None, p: PhysicalParams,
                 rng: np.random.Generator) -> None:
        if cfg.base not in ("random", "goal"):
            raise ValueError(f"unknown base policy {cfg.base!r}")
        if cfg.base == "goal" and goal is None:
            raise ValueError("goal-seeking base needs a goal")
        self.cfg = cfg
        self.spec = spec
        self.goal = goal
        self.p = p
        # separate streams so disabling certification does not shift the base
        self.base_rng, self.cert_rng = rng.spawn(2)

    def _base_action(self, x: JointState) -> Action:
        lim = self.p.human
        if self.cfg.base == "random":
            return Action(self.base_rng.uniform(-lim.phi_max, lim.phi_max),
                          self.base_rng.uniform(-lim.a_max, lim.a_max))
        return greedy_action(x.human, self.goal, True, self.cfg.steer_gain, lim)

    def _sample_backup(self) -> Action:
        s = self.spec.human_backup_set
        return Action(self.cert_rng.uniform(s.phi.lo, s.phi.hi),
                      self.cert_rng.uniform(s.a.lo, s.a.hi))

    def _certified(self, x: JointState, u0: Action) -> bool:
        p = self.p
        x1 = step_joint(x, u0, p)  # human committed, robot to act
        if not (is_safe(x1, p, SafetyMode.CENTER_DISTANCE)
                and is_safe(x1, p, SafetyMode.RECTANGLE_OVERLAP)):
            return False
        k = self.spec.horizon_k
        ra = self.spec.robot_backup.schedule(x1.robot, k + 1, p)
        s = self.spec.human_backup_set
        ha = np.empty((k, 2), dtype=np.float64)
        ha[:, 0] = self.cert_rng.uniform(s.phi.lo, s.phi.hi, size=k)
        ha[:, 1] = self.cert_rng.uniform(s.a.lo, s.a.hi, size=k)
        x2 = step_joint(x1, Action(float(ra[0, 0]), float(ra[0, 1])), p)
        state = np.array(x2.as_array(), dtype=np.float64)
        status = _kernels.rollout_concrete(
            state, ra[1:], ha, p.tau, p.robot.v_max, p.human.v_max, p.d_safe,
            p.robot.body_length, p.robot.body_width,
            p.human.body_length, p.human.body_width)
        return status == 0

    def act(self, x: JointState) -> Action:
        if x.turn is not Turn.HUMAN:
            raise ValueError("human driver acts on human turns only")
        u0 = self._base_action(x)
        if not self.cfg.certify:
            return u0
        if self._certified(x, u0):
            return u0
        return self._sample_backup()


@dataclass(frozen=True)
class RemoteCommand:
    """One held-key snapshot from a remote client."""

    up: bool = False
    down: bool = False
    left: bool = False
    right: bool = False
    seq: int = 0


@dataclass(frozen=True)
class RemoteConfig:
    accel_rate: float = 1.5   # m/s^2 while `up` held
    brake_rate: float = 2.0   # m/s^2 while `down` held
    steer_step: float = 0.06  # rad added per round while left/right held
    steer_decay: float = 0.65 # per-round decay toward straight when released
    timeout_s: float = 1.0    # no fresh input for longer -> zero action


class RemoteDriver:
    """Maps a single-slot command mailbox onto bounded human actions.

    ``submit`` is called whenever a new command arrives (stale sequence
    numbers are discarded); ``act`` consumes at most one pending command per
    round, so a replayed per-round command log reproduces the trajectory.
    """

    def __init__(self, cfg: RemoteConfig, p: PhysicalParams) -> None:
        self.cfg = cfg
        self.p = p
        self.phi = 0.0
        self.held: RemoteCommand | None = None
        self.last_seq = -1
        self.rounds_since_input = 10 ** 9  # nothing received yet
        self.pending: RemoteCommand | None = None

    def submit(self, cmd: RemoteCommand) -> bool:
        """Offer a command; returns False if it regressed the sequence."""
        if cmd.seq <= self.last_seq:
            return False
        self.last_seq = cmd.seq
        self.pending = cmd
        return True

    def act(self, x: JointState) -> Action:
        if x.turn is not Turn.HUMAN:
            raise ValueError("human driver acts on human turns only")
        if self.pending is not None:
            self.held = self.pending
            self.pending = None
            self.rounds_since_input = 0
        else:
            self.rounds_since_input += 1
        cfg = self.cfg
        lim = self.p.human
        if self.held is None or self.rounds_since_input * self.p.tau > cfg.timeout_s:
            self.phi = 0.0
            return Action(0.0, 0.0)
        c = self.held
        if c.left and not c.right:
            self.phi += cfg.steer_step
        elif c.right and not c.left:
            self.phi -= cfg.steer_step
        else:
            self.phi *= cfg.steer_decay
        self.phi = clamp(self.phi, -lim.phi_max, lim.phi_max)
        if c.up and not c.down:
            a = clamp(cfg.accel_rate, -lim.a_max, lim.a_max)
        elif c.down and not c.up:
            a = clamp(-cfg.brake_rate, -lim.a_max, lim.a_max)
        else:
            a = 0.0
        return Action(self.phi, a)
