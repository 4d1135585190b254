"""Episode execution and seeded batch experiments.

An :class:`Episode` advances one round at a time (robot turn, then human
turn), records safety metrics, and stops on collision, goal arrival or the
round cap.  Batches map a seed list over (scenario, robot, human) triples;
every random draw descends from a single ``SeedSequence`` keyed on those
four values, so results are reproducible row by row regardless of worker
count or execution order.
"""

from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass, replace
from enum import Enum
from multiprocessing import get_context

import numpy as np

from ._kernels import rect_overlap
from .controllers import AggressiveController, CemConfig, CemPlanner
from .dynamics import Turn, bodies_overlap, center_distance, step_joint
from .humans import (AdversaryConfig, CompliantAdversary, SocialForceConfig,
                     SocialForceDriver)
from .scenarios import Scenario, builtin
from .shield import (BackupSpec, NoStopZone, PullOver, Shield, ShieldDecision,
                     default_backup_spec)

ROBOT_KINDS = ("aggressive", "cem", "shield", "shield_cem", "shield_pull",
               "shield_zone")
HUMAN_KINDS = ("adversary_random", "adversary_goal", "social")


class Outcome(Enum):
    GOAL = "goal"
    UNSAFE = "unsafe"
    TIMEOUT = "timeout"


class Episode:
    """One scenario run under a fixed robot controller and human driver."""

    def __init__(self, scenario: Scenario, robot, human) -> None:
        self.scenario = scenario
        self.p = scenario.params
        self.robot = robot
        self.human = human
        self.state = scenario.initial_state()
        self.rounds = 0
        self.turns = 0
        self.outcome: Outcome | None = None
        self.backup_count = 0
        self.stops_in_zone = 0
        self.last_decision: ShieldDecision | None = None
        self.min_center_dist = center_distance(self.state)

    @property
    def done(self) -> bool:
        return self.outcome is not None

    @property
    def time_s(self) -> float:
        return self.turns * self.p.tau

    def _observe(self) -> None:
        d = center_distance(self.state)
        if d < self.min_center_dist:
            self.min_center_dist = d
        if d < self.p.d_safe or bodies_overlap(self.state, self.p):
            self.outcome = Outcome.UNSAFE

    def _robot_at_goal(self) -> bool:
        g = self.scenario.robot_goal
        r = self.state.robot
        return (r.x - g.x) ** 2 + (r.y - g.y) ** 2 <= g.radius ** 2

    def _robot_stopped_in_zone(self) -> bool:
        r = self.state.robot
        if r.v != 0.0:
            return False
        lim = self.p.robot
        for x0, y0, x1, y1 in self.scenario.no_stop_zones:
            if rect_overlap(r.x, r.y, r.theta, lim.body_length, lim.body_width,
                            0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.0,
                            x1 - x0, y1 - y0):
                return True
        return False

    def advance(self) -> None:
        """Play one round. No effect once the episode has ended."""
        if self.outcome is not None:
            return
        res = self.robot.act(self.state)
        if isinstance(res, tuple):
            u_r, self.last_decision = res
            if self.last_decision is ShieldDecision.USED_BACKUP:
                self.backup_count += 1
        else:
            u_r = res
            self.last_decision = None
        self.state = step_joint(self.state, u_r, self.p)
        self.turns += 1
        self._observe()
        if self.outcome is None and self._robot_stopped_in_zone():
            self.stops_in_zone += 1
        if self.outcome is None and self._robot_at_goal():
            self.outcome = Outcome.GOAL
        if self.outcome is None:
            u_h = self.human.act(self.state)
            self.state = step_joint(self.state, u_h, self.p)
            self.turns += 1
            self._observe()
        self.rounds += 1
        if self.outcome is None and self.rounds >= self.scenario.episode_cap:
            self.outcome = Outcome.TIMEOUT

    def run(self) -> Outcome:
        while self.outcome is None:
            self.advance()
        return self.outcome


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    robot: str
    human: str
    seed: int


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    robot: str
    human: str
    seed: int
    outcome: Outcome
    rounds: int
    turns: int
    time_s: float
    min_center_dist: float
    backup_count: int
    stops_in_zone: int

    @property
    def time_to_goal_s(self) -> float:
        """Episode time, charging non-finishers the full round cap."""
        if self.outcome is Outcome.GOAL:
            return self.time_s
        cap = builtin(self.scenario).episode_cap
        return cap * 2.0 * builtin(self.scenario).params.tau


def _label_entropy(cfg: RunConfig) -> tuple[int, ...]:
    return (cfg.seed, zlib.crc32(cfg.scenario.encode()),
            zlib.crc32(cfg.robot.encode()), zlib.crc32(cfg.human.encode()))


def episode_rngs(cfg: RunConfig) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent robot and human generators for one batch row."""
    ss = np.random.SeedSequence(_label_entropy(cfg))
    child_r, child_h = ss.spawn(2)
    return np.random.default_rng(child_r), np.random.default_rng(child_h)


def make_robot(kind: str, scenario: Scenario, rng: np.random.Generator):
    p = scenario.params
    wps = scenario.robot_subgoals

    def aggressive():
        return AggressiveController(wps, p.robot)

    if kind == "aggressive":
        return aggressive()
    if kind == "cem":
        return CemPlanner(wps, p, rng, CemConfig(), scenario.walls)
    if kind == "shield":
        return Shield(aggressive(), default_backup_spec(), p)
    if kind == "shield_cem":
        return Shield(CemPlanner(wps, p, rng, CemConfig(), scenario.walls),
                      default_backup_spec(), p)
    if kind == "shield_pull":
        if scenario.pull_over_lane_y is None:
            raise ValueError(
                f"scenario {scenario.name!r} has no pull_over_lane_y; "
                "the pull-over backup needs one")
        spec = replace(default_backup_spec(),
                       robot_backup=PullOver(target_lane_y=scenario.pull_over_lane_y))
        return Shield(aggressive(), spec, p)
    if kind == "shield_zone":
        spec = replace(default_backup_spec(),
                       robot_backup=NoStopZone(zones=scenario.no_stop_zones))
        return Shield(aggressive(), spec, p)
    raise ValueError(f"unknown robot kind {kind!r}; known: {', '.join(ROBOT_KINDS)}")


def make_human(kind: str, scenario: Scenario, rng: np.random.Generator,
               spec: BackupSpec | None = None):
    p = scenario.params
    g = scenario.human_goal
    spec = spec or default_backup_spec()
    if kind == "adversary_random":
        return CompliantAdversary(AdversaryConfig(base="random"), spec,
                                  g.center, p, rng)
    if kind == "adversary_goal":
        return CompliantAdversary(AdversaryConfig(base="goal"), spec,
                                  g.center, p, rng)
    if kind == "social":
        cfg = SocialForceConfig().jittered(rng)
        return SocialForceDriver(cfg, (g.x, g.y, g.radius), scenario.walls, p,
                                 rng)
    raise ValueError(f"unknown human kind {kind!r}; known: {', '.join(HUMAN_KINDS)}")


def run_episode(cfg: RunConfig) -> RunRecord:
    scenario = builtin(cfg.scenario)
    rng_r, rng_h = episode_rngs(cfg)
    robot = make_robot(cfg.robot, scenario, rng_r)
    human = make_human(cfg.human, scenario, rng_h)
    ep = Episode(scenario, robot, human)
    outcome = ep.run()
    return RunRecord(
        scenario=cfg.scenario, robot=cfg.robot, human=cfg.human, seed=cfg.seed,
        outcome=outcome, rounds=ep.rounds, turns=ep.turns, time_s=ep.time_s,
        min_center_dist=ep.min_center_dist, backup_count=ep.backup_count,
        stops_in_zone=ep.stops_in_zone)


def batch_configs(scenario: str, robot: str, human: str,
                  seeds: range | list[int]) -> list[RunConfig]:
    return [RunConfig(scenario, robot, human, s) for s in seeds]


def run_batch(configs: list[RunConfig], processes: int = 1) -> list[RunRecord]:
    """Run every config; output order always matches input order."""
    if processes <= 1:
        return [run_episode(c) for c in configs]
    ctx = get_context("fork")
    with ctx.Pool(processes) as pool:
        return pool.map(run_episode, configs, chunksize=1)


CSV_FIELDS = ("scenario", "robot", "human", "seed", "outcome", "rounds",
              "turns", "time_s", "min_center_dist", "backup_count",
              "stops_in_zone")


def records_to_csv(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([r.scenario, r.robot, r.human, r.seed, r.outcome.value,
                    r.rounds, r.turns, f"{r.time_s:.6f}",
                    f"{r.min_center_dist:.6f}", r.backup_count,
                    r.stops_in_zone])
    return buf.getvalue()


def write_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(records_to_csv(records))


@dataclass(frozen=True)
class BatchSummary:
    n: int
    unsafe_fraction: float
    goal_fraction: float
    mean_time_to_goal_s: float
    mean_min_center_dist: float
    total_stops_in_zone: int


def summarize(records: list[RunRecord]) -> BatchSummary:
    n = len(records)
    if n == 0:
        raise ValueError("empty batch")
    unsafe = sum(r.outcome is Outcome.UNSAFE for r in records)
    goal = sum(r.outcome is Outcome.GOAL for r in records)
    return BatchSummary(
        n=n,
        unsafe_fraction=unsafe / n,
        goal_fraction=goal / n,
        mean_time_to_goal_s=sum(r.time_to_goal_s for r in records) / n,
        mean_min_center_dist=sum(r.min_center_dist for r in records) / n,
        total_stops_in_zone=sum(r.stops_in_zone for r in records))
