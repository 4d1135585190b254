"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (through the capture plugin) with the
numbers it measured, so a test log doubles as a results table.  Episode
batches are cached per (scenario, robot, human) cell and shared between
criteria; every batch runs seeds 0..99 deterministically.
"""

import multiprocessing
import os
import time

import numpy as np
import pytest

import props
from driveshield.harness import batch_configs, run_batch, records_to_csv, summarize
from driveshield.params import PhysicalParams
from driveshield.verify import (check_recoverability_soundness,
                                check_transformer_soundness)

SEEDS = range(100)
PROCS = min(8, multiprocessing.cpu_count())
SAFETY_TASKS = ("merge", "cross", "turn")
HUMANS = ("adversary_random", "adversary_goal", "social")


class _Cells:
    """Lazy per-cell batch cache with wall-time bookkeeping."""

    def __init__(self):
        self.results = {}

    def get(self, scenario: str, robot: str, human: str):
        key = (scenario, robot, human)
        if key not in self.results:
            t0 = time.perf_counter()
            recs = run_batch(batch_configs(scenario, robot, human, SEEDS),
                             processes=PROCS)
            self.results[key] = (summarize(recs), time.perf_counter() - t0)
        return self.results[key]


@pytest.fixture(scope="module")
def cells():
    return _Cells()


def _report(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_transformer_soundness(capsys):
    res = check_transformer_soundness(trials=100_000, seed=0)
    ok = res.failures == 0 and res.elapsed_s < 10.0
    _report(capsys, "criterion-1 (transformer soundness)", ok,
            f"{res.failures} containment failures in {res.trials} trials, "
            f"{res.elapsed_s:.2f}s (budget 10s)")


def test_criterion_2_recoverability_soundness(capsys):
    res = check_recoverability_soundness(states=1000, rollouts=100, seed=0)
    ok = res.failures == 0 and res.elapsed_s < 60.0
    _report(capsys, "criterion-2 (recoverability soundness)", ok,
            f"{res.failures} unsafe rollouts in {res.trials} "
            f"(1000 states x 100 rollouts), {res.elapsed_s:.2f}s (budget 60s)")


def test_criterion_3_shield_never_unsafe(capsys, cells):
    rows = []
    elapsed = 0.0
    worst = 0.0
    for scen in SAFETY_TASKS:
        for human in HUMANS:
            s, dt = cells.get(scen, "shield", human)
            elapsed += dt
            worst = max(worst, s.unsafe_fraction)
            rows.append(f"{scen}/{human}={s.unsafe_fraction:.2f}")
    ok = worst == 0.0 and elapsed < 300.0
    _report(capsys, "criterion-3 (shield safety matrix)", ok,
            f"unsafe {', '.join(rows)}; {elapsed:.0f}s (budget 300s)")


def test_criterion_4_shield_beats_cem(capsys, cells):
    lines = []
    ok = True
    for scen in SAFETY_TASKS:
        agg, _ = cells.get(scen, "aggressive", "social")
        cem, _ = cells.get(scen, "cem", "social")
        shd, _ = cells.get(scen, "shield", "social")
        cell_ok = (agg.unsafe_fraction > cem.unsafe_fraction
                   and cem.unsafe_fraction >= 0.0
                   and shd.unsafe_fraction == 0.0
                   and shd.mean_time_to_goal_s < cem.mean_time_to_goal_s)
        ok = ok and cell_ok
        lines.append(
            f"{scen}: unsafe agg={agg.unsafe_fraction:.2f} "
            f"cem={cem.unsafe_fraction:.2f} shield={shd.unsafe_fraction:.2f}, "
            f"ttg shield={shd.mean_time_to_goal_s:.1f}s "
            f"cem={cem.mean_time_to_goal_s:.1f}s")
    _report(capsys, "criterion-4 (shield vs planner baseline)", ok,
            "; ".join(lines))


def test_criterion_5_pull_over_backup(capsys, cells):
    pull, _ = cells.get("two_lanes", "shield_pull", "social")
    cem, _ = cells.get("two_lanes", "cem", "social")
    ok = (pull.unsafe_fraction == 0.0
          and pull.mean_time_to_goal_s < cem.mean_time_to_goal_s)
    _report(capsys, "criterion-5 (pull-over backup)", ok,
            f"two_lanes: unsafe={pull.unsafe_fraction:.2f}, "
            f"ttg pull={pull.mean_time_to_goal_s:.1f}s < "
            f"cem={cem.mean_time_to_goal_s:.1f}s")


def test_criterion_6_no_stop_zone_backup(capsys, cells):
    zone, _ = cells.get("turn_no_stop", "shield_zone", "social")
    plain, _ = cells.get("turn_no_stop", "shield", "social")
    ok = (zone.total_stops_in_zone == 0
          and zone.unsafe_fraction == 0.0
          and zone.mean_time_to_goal_s >= plain.mean_time_to_goal_s)
    _report(capsys, "criterion-6 (no-stop-zone backup)", ok,
            f"turn_no_stop: stops zone={zone.total_stops_in_zone} "
            f"(plain shield {plain.total_stops_in_zone}), "
            f"unsafe={zone.unsafe_fraction:.2f}, "
            f"ttg zone={zone.mean_time_to_goal_s:.1f}s >= "
            f"plain={plain.mean_time_to_goal_s:.1f}s")


def test_criterion_7_reproducibility(capsys):
    cfgs = batch_configs("merge", "shield", "social", range(20))
    serial = records_to_csv(run_batch(cfgs, processes=1))
    again = records_to_csv(run_batch(cfgs, processes=1))
    # a 4-worker pool exercises out-of-order execution even on one core
    parallel = records_to_csv(run_batch(cfgs, processes=4))
    ok = serial.encode() == again.encode() == parallel.encode()
    _report(capsys, "criterion-7 (byte-identical reruns)", ok,
            f"20-episode CSV identical across reruns and 1 vs 4 "
            f"processes ({len(serial.encode())} bytes)")


def test_criterion_8_dynamics_properties(capsys):
    p = PhysicalParams()
    n = 10_000
    fails = {
        "velocity-clamp": props.velocity_clamp(n, np.random.default_rng(100), p),
        "rest-fixpoint": props.rest_fixpoint(n, np.random.default_rng(101), p),
        "turn-commutation": props.turn_commutation(
            n, np.random.default_rng(102), p),
        "abstract-monotone": props.abstract_step_monotone(
            n, np.random.default_rng(103), p),
    }
    ok = all(v == 0 for v in fails.values())
    detail = ", ".join(f"{k}={v}/{n}" for k, v in fails.items())
    _report(capsys, "criterion-8 (dynamics property suite)", ok, detail)
