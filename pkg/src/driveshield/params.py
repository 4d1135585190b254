"""Physical constants shared by the simulator, the shield and the planners."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import hypot, pi


@dataclass(frozen=True)
class AgentLimits:
    """Actuation bounds and body geometry for one vehicle."""

    a_max: float = 2.0        # m/s^2, |acceleration| bound
    phi_max: float = pi / 4   # rad, |steering| bound
    v_max: float = 5.0        # m/s, speed is clamped to [0, v_max]
    body_length: float = 2.0  # m
    body_width: float = 1.0   # m

    def __post_init__(self) -> None:
        for name in ("a_max", "phi_max", "v_max", "body_length", "body_width"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def circumradius(self) -> float:
        """Radius of the smallest disc centered on the body that contains it."""
        return hypot(self.body_length / 2.0, self.body_width / 2.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Time step, safety margin and per-agent limits for one simulation."""

    tau: float = 0.1     # s, one agent move per turn
    d_safe: float = 1.0  # m, required center distance in the distance safety model
    robot: AgentLimits = field(default_factory=AgentLimits)
    human: AgentLimits = field(default_factory=AgentLimits)

    def __post_init__(self) -> None:
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if self.d_safe < 0.0:
            raise ValueError("d_safe must be non-negative")

    @property
    def safe_box_distance(self) -> float:
        # center distance below which two boxes can no longer be declared safe:
        # covers both the center-distance model and any rectangle overlap
        return self.d_safe + self.robot.circumradius + self.human.circumradius
