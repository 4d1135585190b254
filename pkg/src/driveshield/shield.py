"""Recoverability certification and the runtime action shield.

The shield wraps an arbitrary robot controller.  Each robot turn it simulates
the proposed action, asks whether the resulting state is *recoverable* (the
robot could switch to its backup rule and provably come to a safe stop no
matter which backup-set action the human plays each round), and if not plays
the backup rule itself instead.

Backup rules may be time varying: a rule turns a concrete robot state into a
k-step action schedule by simulating its own feedback law, and the abstract
rollout feeds ``schedule[t]`` as a singleton action box at step ``t``.  When
the shield overrides, it replays ``schedule[0]`` from the live state, so the
feedback stays closed-loop across rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import pi

import numpy as np

from . import _kernels
from .dynamics import (Action, ActionBoundsError, AgentState, JointState, Turn,
                       check_action, step_joint)
from .params import PhysicalParams
from .reachability import ActionBox, Interval

_NO_ZONES = np.empty((0, 4), dtype=np.float64)


class ShieldDecision(Enum):
    USED_INNER = "inner"
    USED_BACKUP = "backup"


class InnerControllerError(RuntimeError):
    """The wrapped controller raised or produced an out-of-bounds action."""


@dataclass(frozen=True)
class BackupPolicy:
    """Base for robot backup rules; subclasses set the kernel dispatch fields."""

    def _kernel_args(self) -> tuple[int, float, float, float, float, np.ndarray]:
        # (kind, target_y, steer_gain, heading_gain, pass_speed, zones)
        raise NotImplementedError

    @property
    def brake_rate(self) -> float:
        raise NotImplementedError

    def schedule(self, s: AgentState, k: int, p: PhysicalParams) -> np.ndarray:
        """Simulate the rule from ``s`` for ``k`` steps; returns (k, 2) actions."""
        if self.brake_rate <= 0.0 or self.brake_rate > p.robot.a_max:
            raise ValueError("brake_rate must be in (0, a_max]")
        kind, target_y, steer_gain, heading_gain, pass_speed, zones = self._kernel_args()
        out = np.empty((k, 2), dtype=np.float64)
        _kernels.backup_schedule(
            np.array(s.as_tuple(), dtype=np.float64), kind, k, p.tau,
            p.robot.v_max, p.robot.phi_max, self.brake_rate, target_y,
            steer_gain, heading_gain, pass_speed, zones,
            p.robot.body_length, p.robot.body_width, out)
        return out


@dataclass(frozen=True)
class ConstantBrake(BackupPolicy):
    """Brake straight ahead at a fixed rate until at rest."""

    rate: float = 1.0

    @property
    def brake_rate(self) -> float:
        return self.rate

    def _kernel_args(self):
        return 0, 0.0, 0.0, 0.0, 0.0, _NO_ZONES


@dataclass(frozen=True)
class PullOver(BackupPolicy):
    """Steer toward a lane ``y = target_lane_y`` (road axis +x) while braking."""

    target_lane_y: float = 0.0
    rate: float = 1.0
    steer_gain: float = 0.5
    heading_gain: float = 1.8

    @property
    def brake_rate(self) -> float:
        return self.rate

    def _kernel_args(self):
        return 1, self.target_lane_y, self.steer_gain, self.heading_gain, 0.0, _NO_ZONES


@dataclass(frozen=True)
class NoStopZone(BackupPolicy):
    """Brake, but never come to rest inside a no-stop zone: if the straight
    stop footprint lands in one, keep driving (up to ``pass_speed``) until the
    footprint clears, then brake."""

    zones: tuple[tuple[float, float, float, float], ...] = ()
    rate: float = 1.0
    pass_speed: float = 2.0

    @property
    def brake_rate(self) -> float:
        return self.rate

    def _kernel_args(self):
        z = (np.array(self.zones, dtype=np.float64).reshape(-1, 4)
             if self.zones else _NO_ZONES)
        return 2, 0.0, 0.0, 0.0, self.pass_speed, z


@dataclass(frozen=True)
class BackupSpec:
    """Everything the recoverability check needs besides the state."""

    robot_backup: BackupPolicy
    human_backup_set: ActionBox
    horizon_k: int = 160

    def __post_init__(self) -> None:
        if self.horizon_k < 1:
            raise ValueError("horizon_k must be at least 1")
        if self.human_backup_set.a.hi > 0.0:
            # the human backup set must brake: equilibrium would otherwise be
            # unreachable and the early-exit in the rollout unsound
            raise ValueError("human backup set must be non-accelerating (a.hi <= 0)")


def default_backup_spec() -> BackupSpec:
    """Straight-line brake robot, gentle braking human set with mild steering."""
    return BackupSpec(
        robot_backup=ConstantBrake(rate=1.0),
        human_backup_set=ActionBox(phi=Interval(-pi / 10, pi / 10),
                                   a=Interval(-1.0, -0.5)),
        horizon_k=160,
    )


def _check_human_set(spec: BackupSpec, p: PhysicalParams) -> None:
    s = spec.human_backup_set
    if max(abs(s.phi.lo), abs(s.phi.hi)) > p.human.phi_max or abs(s.a.lo) > p.human.a_max:
        raise ValueError("human backup set exceeds the human's actuation bounds")


def is_recoverable(x_prime: JointState, spec: BackupSpec, p: PhysicalParams) -> bool:
    """Certify a post-robot-move state.

    Abstract rollout: starting from the singleton box at ``x_prime``, apply k
    rounds where the robot plays its backup schedule and the human plays its
    backup action box.  True iff every box keeps the conservative safe
    distance and the final box is an equilibrium.
    """
    if x_prime.turn is not Turn.HUMAN:
        raise ValueError("is_recoverable expects a post-robot-move state (human to act)")
    _check_human_set(spec, p)
    sched = spec.robot_backup.schedule(x_prime.robot, spec.horizon_k, p)
    state = np.array(x_prime.as_array(), dtype=np.float64)
    return bool(_kernels.is_recoverable_raw(
        state, sched, spec.human_backup_set.as_array(),
        p.tau, p.robot.v_max, p.human.v_max, p.safe_box_distance))


class Shield:
    """Model-predictive shield: pass certified inner actions, else back up."""

    def __init__(self, inner, spec: BackupSpec, p: PhysicalParams) -> None:
        self.inner = inner
        self.spec = spec
        self.p = p

    def act(self, x: JointState) -> tuple[Action, ShieldDecision]:
        if x.turn is not Turn.ROBOT:
            raise ValueError("shield acts on robot turns only")
        try:
            u = self.inner.act(x)
            check_action(u, self.p.robot)
        except ActionBoundsError as e:
            raise InnerControllerError(f"inner controller action out of bounds: {e}") from e
        except Exception as e:
            if isinstance(e, InnerControllerError):
                raise
            raise InnerControllerError(f"inner controller failed: {e}") from e
        x_prime = step_joint(x, u, self.p)
        if is_recoverable(x_prime, self.spec, self.p):
            return u, ShieldDecision.USED_INNER
        sched = self.spec.robot_backup.schedule(x.robot, 1, self.p)
        return Action(float(sched[0, 0]), float(sched[0, 1])), ShieldDecision.USED_BACKUP
