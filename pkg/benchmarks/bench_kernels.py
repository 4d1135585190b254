"""Timing comparison between the compiled kernels and the pure-Python mirror.

Run as a script:

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is timed on representative inputs (the shapes the shield and the
CEM planner actually use) and reported as microseconds per call plus the
speedup of the compiled backend.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

import driveshield._kernels._pure as pure

try:
    import driveshield._kernels._core as core
except ImportError:
    core = None


def _inputs():
    rng = np.random.default_rng(0)
    state = np.array([0.0, 0.0, 3.0, 0.1, 18.0, 2.0, 3.1, math.pi])
    sched = np.zeros((160, 2))
    sched[:, 1] = -1.0
    uh = np.array([-math.pi / 10, math.pi / 10, -1.0, -0.5])
    ha = np.column_stack([rng.uniform(-0.3, 0.3, 160),
                          rng.uniform(-1.0, -0.5, 160)])
    box = np.array([-1.0, 1.0, -1.0, 1.0, 2.0, 3.0, 0.0, 0.2,
                    17.0, 19.0, -1.0, 1.0, 2.0, 3.0, 3.0, 3.2])
    ur = np.array([0.0, 0.0, -1.0, -1.0])
    acts = np.stack([np.column_stack([rng.uniform(-0.8, 0.8, 30),
                                      rng.uniform(-2, 2, 30)])
                     for _ in range(64)])
    walls = np.array([[-40.0, 2.5, -25.0, 2.5], [-18.0, 2.5, 32.0, 2.5],
                      [-44.0, -2.5, -18.5, -2.5], [-11.5, -2.5, 32.0, -2.5]])
    zones = np.array([[-4.0, -4.0, 4.0, 4.0]])
    out16 = np.empty(16)
    out_sched = np.empty((160, 2))
    scores = np.empty(64)

    return {
        "abstract_step": lambda k: k.abstract_step(box, ur, uh, 0.1, 5.0, 5.0,
                                                   out16),
        "is_recoverable_raw": lambda k: k.is_recoverable_raw(
            state, sched, uh, 0.1, 5.0, 5.0, 3.236),
        "rollout_concrete": lambda k: k.rollout_concrete(
            state, sched, ha, 0.1, 5.0, 5.0, 1.0, 2.0, 1.0, 2.0, 1.0),
        "backup_schedule": lambda k: k.backup_schedule(
            state[:4], 2, 160, 0.1, 5.0, math.pi / 4, 1.0, 0.0, 0.5, 1.8,
            2.0, zones, 2.0, 1.0, out_sched),
        "cem_scores (64x30)": lambda k: k.cem_scores(
            state[:4], state[4:], acts, 0.1, 5.0, -20.0, 0.0, 20.0, 0.0,
            1.0, 0.5, 1e4, 12.0, walls, 1.8, scores),
    }


def _time(fn, repeat: int) -> float:
    """Best-of-N microseconds per call."""
    number = max(1, int(2000 / max(1.0, timeit.timeit(fn, number=10) * 1e3)))
    best = min(timeit.repeat(fn, number=number, repeat=repeat))
    return best / number * 1e6


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if core is None:
        print("compiled backend unavailable; timing the pure backend only")

    name_w = 22
    header = f"{'kernel':{name_w}} {'pure us':>10}"
    if core is not None:
        header += f" {'compiled us':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in _inputs().items():
        t_pure = _time(lambda: call(pure), args.repeat)
        line = f"{name:{name_w}} {t_pure:10.2f}"
        if core is not None:
            t_core = _time(lambda: call(core), args.repeat)
            line += f" {t_core:12.2f} {t_pure / t_core:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
