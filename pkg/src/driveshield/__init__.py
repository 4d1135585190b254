"""Turn-based two-car simulator with a recoverability shield.

A robot car and a human car alternate moves under unicycle-style dynamics.
Any robot controller can be wrapped in a :class:`Shield` that checks, via
interval reachability, whether the state its proposed action leads to is
still recoverable by a designated backup maneuver no matter what the human
does within a bounded action set; if not, the backup maneuver plays instead.

Hot loops run in a compiled extension when available, with a pure-Python
fallback selected at import time (see :data:`BACKEND`, and the
``DRIVESHIELD_PURE`` environment variable to force the fallback).
"""

from ._kernels import BACKEND
from .params import AgentLimits, PhysicalParams
from .dynamics import (Action, ActionBoundsError, AgentState, JointState,
                       SafetyMode, Turn, bodies_overlap, center_distance,
                       is_safe, step_agent, step_joint)
from .reachability import (ActionBox, AgentBox, Interval, StateBox,
                           abstract_step, box_is_equilibrium, box_is_safe,
                           box_min_center_dist)
from .shield import (BackupSpec, ConstantBrake, InnerControllerError,
                     NoStopZone, PullOver, Shield, ShieldDecision,
                     default_backup_spec, is_recoverable)
from .controllers import (AggressiveConfig, AggressiveController, CemConfig,
                          CemPlanner, WaypointTracker)
from .humans import (AdversaryConfig, CompliantAdversary, RemoteCommand,
                     RemoteConfig, RemoteDriver, SocialForceConfig,
                     SocialForceDriver)
from .scenarios import (BUILTIN_NAMES, GoalSpec, Lane, Scenario,
                        ScenarioError, builtin)
from .harness import (Episode, Outcome, RunConfig, RunRecord, run_batch,
                      run_episode, summarize)

__version__ = "1.0.0"

__all__ = [
    "BACKEND", "__version__",
    "AgentLimits", "PhysicalParams",
    "Action", "ActionBoundsError", "AgentState", "JointState", "SafetyMode",
    "Turn", "bodies_overlap", "center_distance", "is_safe", "step_agent",
    "step_joint",
    "ActionBox", "AgentBox", "Interval", "StateBox", "abstract_step",
    "box_is_equilibrium", "box_is_safe", "box_min_center_dist",
    "BackupSpec", "ConstantBrake", "InnerControllerError", "NoStopZone",
    "PullOver", "Shield", "ShieldDecision", "default_backup_spec",
    "is_recoverable",
    "AggressiveConfig", "AggressiveController", "CemConfig", "CemPlanner",
    "WaypointTracker",
    "AdversaryConfig", "CompliantAdversary", "RemoteCommand", "RemoteConfig",
    "RemoteDriver", "SocialForceConfig", "SocialForceDriver",
    "BUILTIN_NAMES", "GoalSpec", "Lane", "Scenario", "ScenarioError",
    "builtin",
    "Episode", "Outcome", "RunConfig", "RunRecord", "run_batch",
    "run_episode", "summarize",
]
