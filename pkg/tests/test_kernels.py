import math
import subprocess
import sys

import numpy as np
import pytest

from driveshield import _kernels
from driveshield._kernels import _pure


requires_compiled = pytest.mark.skipif(
    _kernels.BACKEND != "compiled",
    reason="compiled backend unavailable; parity is trivially true")


def test_backend_reports_itself():
    assert _kernels.BACKEND in ("compiled", "pure")


def test_pure_backend_env_switch():
    code = ("import driveshield._kernels as k;"
            "print(k.BACKEND)")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"DRIVESHIELD_PURE": "1", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"


def _compiled():
    import driveshield._kernels._core as core
    return core


@requires_compiled
def test_step_agent_parity():
    core = _compiled()
    rng = np.random.default_rng(10)
    for _ in range(5000):
        args = (rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0, 5),
                rng.uniform(-4, 4), rng.uniform(-0.8, 0.8), rng.uniform(-2, 2),
                0.1, 5.0)
        assert core.step_agent(*args) == _pure.step_agent(*args)


@requires_compiled
def test_rect_overlap_parity():
    core = _compiled()
    rng = np.random.default_rng(11)
    for _ in range(5000):
        args = (rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4),
                2.0, 1.0,
                rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4),
                2.0, 1.0)
        assert core.rect_overlap(*args) == _pure.rect_overlap(*args)


def _random_box(rng) -> np.ndarray:
    b = np.empty(16)
    for o in range(0, 16, 2):
        lo, hi = np.sort(rng.uniform(-20, 20, size=2))
        if o in (4, 12):              # speed dims stay in [0, v_max]
            lo, hi = np.sort(rng.uniform(0, 5, size=2))
        b[o], b[o + 1] = lo, hi
    return b


@requires_compiled
def test_abstract_step_parity():
    core = _compiled()
    rng = np.random.default_rng(12)
    for _ in range(2000):
        box = _random_box(rng)
        ur = np.array([*np.sort(rng.uniform(-0.8, 0.8, 2)),
                       *np.sort(rng.uniform(-2, 2, 2))])
        uh = np.array([*np.sort(rng.uniform(-0.8, 0.8, 2)),
                       *np.sort(rng.uniform(-2, 0, 2))])
        a = np.empty(16)
        b = np.empty(16)
        core.abstract_step(box, ur, uh, 0.1, 5.0, 5.0, a)
        _pure.abstract_step(box, ur, uh, 0.1, 5.0, 5.0, b)
        assert np.array_equal(a, b)
        assert (core.box_min_center_dist(box)
                == _pure.box_min_center_dist(box))


@requires_compiled
def test_recoverability_and_rollout_parity():
    core = _compiled()
    rng = np.random.default_rng(13)
    uh = np.array([-math.pi / 10, math.pi / 10, -1.0, -0.5])
    for _ in range(300):
        state = np.array([
            rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0, 5),
            rng.uniform(-math.pi, math.pi),
            rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(0, 5),
            rng.uniform(-math.pi, math.pi)])
        sched = np.zeros((160, 2))
        sched[:, 1] = -1.0
        assert (core.is_recoverable_raw(state, sched, uh, 0.1, 5.0, 5.0, 3.236)
                == _pure.is_recoverable_raw(state, sched, uh, 0.1, 5.0, 5.0, 3.236))
        ha = np.column_stack([rng.uniform(-0.3, 0.3, 160),
                              rng.uniform(-1.0, -0.5, 160)])
        assert (core.rollout_concrete(state, sched, ha, 0.1, 5.0, 5.0, 1.0,
                                      2.0, 1.0, 2.0, 1.0)
                == _pure.rollout_concrete(state, sched, ha, 0.1, 5.0, 5.0, 1.0,
                                          2.0, 1.0, 2.0, 1.0))


@requires_compiled
def test_backup_schedule_parity():
    core = _compiled()
    rng = np.random.default_rng(14)
    zones = np.array([[-4.0, -4.0, 4.0, 4.0]])
    none = np.empty((0, 4))
    for _ in range(300):
        s = np.array([rng.uniform(-10, 10), rng.uniform(-10, 10),
                      rng.uniform(0, 5), rng.uniform(-math.pi, math.pi)])
        for kind, z in ((0, none), (1, none), (2, zones)):
            a = np.empty((80, 2))
            b = np.empty((80, 2))
            core.backup_schedule(s, kind, 80, 0.1, 5.0, math.pi / 4, 1.0,
                                 0.0, 0.5, 1.8, 2.0, z, 2.0, 1.0, a)
            _pure.backup_schedule(s, kind, 80, 0.1, 5.0, math.pi / 4, 1.0,
                                  0.0, 0.5, 1.8, 2.0, z, 2.0, 1.0, b)
            assert np.array_equal(a, b), f"kind {kind} diverged"


@requires_compiled
def test_cem_scores_parity():
    core = _compiled()
    rng = np.random.default_rng(15)
    walls = np.array([[5.0, -5.0, 5.0, 5.0], [-3.0, 8.0, 9.0, 8.0]])
    for _ in range(50):
        rstate = np.array([0.0, 0.0, rng.uniform(0, 5),
                           rng.uniform(-math.pi, math.pi)])
        hstate = np.array([rng.uniform(-15, 15), rng.uniform(-15, 15),
                           rng.uniform(0, 5), rng.uniform(-math.pi, math.pi)])
        acts = np.stack([np.column_stack([rng.uniform(-0.8, 0.8, 30),
                                          rng.uniform(-2, 2, 30)])
                         for _ in range(16)])
        a = np.empty(16)
        b = np.empty(16)
        args = (0.1, 5.0, -20.0, 0.0, 20.0, 0.0, 1.0, 0.5, 1e4, 12.0,
                walls, 1.8)
        core.cem_scores(rstate, hstate, acts, *args, a)
        _pure.cem_scores(rstate, hstate, acts, *args, b)
        assert np.array_equal(a, b)


def test_rect_overlap_oracle_cases():
    # cross-checked against exact polygon intersection
    assert _kernels.rect_overlap(0, 0, 0, 2, 1, 1.5, 0, 0, 2, 1)
    assert not _kernels.rect_overlap(0, 0, 0, 2, 1, 2.1, 0, 0, 2, 1)
    assert _kernels.rect_overlap(0, 0, 0, 2, 1, 1.4, 0, math.pi / 2, 2, 1)
    # touching edges do not count
    assert not _kernels.rect_overlap(0, 0, 0, 2, 1, 2.0, 0, 0, 2, 1)


def test_rect_overlap_against_exact_polygons():
    shapely = pytest.importorskip("shapely")
    from shapely.affinity import rotate, translate
    from shapely.geometry import box

    def poly(x, y, th, l, w):
        return translate(rotate(box(-l / 2, -w / 2, l / 2, w / 2),
                                th, use_radians=True), x, y)

    rng = np.random.default_rng(16)
    mismatches = 0
    for _ in range(3000):
        ax, ay, bx, by = rng.uniform(-3, 3, size=4)
        ath, bth = rng.uniform(-math.pi, math.pi, size=2)
        got = _kernels.rect_overlap(ax, ay, ath, 2.0, 1.0, bx, by, bth, 2.0, 1.0)
        pa = poly(ax, ay, ath, 2.0, 1.0)
        pb = poly(bx, by, bth, 2.0, 1.0)
        want = pa.intersection(pb).area > 1e-12
        # disagreement is only tolerable within float noise of touching
        if got != want and abs(pa.intersection(pb).area) > 1e-9:
            mismatches += 1
    assert mismatches == 0
