"""Randomized soundness checks for the reachability machinery.

These are the checks behind ``driveshield verify``: the interval transformer
must contain every concrete successor it abstracts, a state certified as
recoverable must survive every concrete backup rollout, and the two kernel
backends must agree bitwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import pi

import numpy as np

from ._kernels import BACKEND, abstract_step, rollout_concrete, step_agent
from .dynamics import AgentState, JointState, Turn
from .params import PhysicalParams
from .shield import BackupSpec, default_backup_spec, is_recoverable


@dataclass(frozen=True)
class CheckResult:
    name: str
    trials: int
    failures: int
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: {self.failures} failures in "
                f"{self.trials} trials ({self.elapsed_s:.2f}s, backend={BACKEND})")


def check_transformer_soundness(trials: int = 100_000, seed: int = 0,
                                p: PhysicalParams | None = None) -> CheckResult:
    """Concrete successors of states in a box land inside the abstract image.

    Boxes, actions within the action boxes, and member states are all drawn
    uniformly; containment is checked with zero tolerance.
    """
    p = p or PhysicalParams()
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    u = rng.random((trials, 36))
    box = np.empty(16)
    out = np.empty(16)
    ub = np.empty((2, 4))
    lims = (p.robot, p.human)
    failures = 0
    for i in range(trials):
        row = u[i]
        conc = [0.0] * 8
        act = [0.0] * 4
        for ag in range(2):
            o = 8 * ag
            r = row[18 * ag:18 * (ag + 1)]
            lim = lims[ag]
            cx = -24.0 + 48.0 * r[0]
            cy = -24.0 + 48.0 * r[1]
            wx = 2.0 * r[2]
            wy = 2.0 * r[3]
            v0 = lim.v_max * r[4]
            v1 = lim.v_max * r[5]
            if v1 < v0:
                v0, v1 = v1, v0
            thc = -pi + 2.0 * pi * r[6]
            thw = 0.5 * r[7]
            box[o:o + 8] = (cx - wx, cx + wx, cy - wy, cy + wy,
                            v0, v1, thc - thw, thc + thw)
            p0 = lim.phi_max * (2.0 * r[8] - 1.0)
            p1 = lim.phi_max * (2.0 * r[9] - 1.0)
            if p1 < p0:
                p0, p1 = p1, p0
            a0 = lim.a_max * (2.0 * r[10] - 1.0)
            a1 = lim.a_max * (2.0 * r[11] - 1.0)
            if a1 < a0:
                a0, a1 = a1, a0
            ub[ag] = (p0, p1, a0, a1)
            # one concrete member state and one member action
            conc[4 * ag + 0] = box[o] + (box[o + 1] - box[o]) * r[12]
            conc[4 * ag + 1] = box[o + 2] + (box[o + 3] - box[o + 2]) * r[13]
            conc[4 * ag + 2] = v0 + (v1 - v0) * r[14]
            conc[4 * ag + 3] = box[o + 6] + (box[o + 7] - box[o + 6]) * r[15]
            act[2 * ag + 0] = p0 + (p1 - p0) * r[16]
            act[2 * ag + 1] = a0 + (a1 - a0) * r[17]
        abstract_step(box, ub[0], ub[1], p.tau, p.robot.v_max, p.human.v_max, out)
        for ag in range(2):
            o = 8 * ag
            nx, ny, nv, nth = step_agent(
                conc[4 * ag], conc[4 * ag + 1], conc[4 * ag + 2], conc[4 * ag + 3],
                act[2 * ag], act[2 * ag + 1], p.tau, lims[ag].v_max)
            if not (out[o] <= nx <= out[o + 1] and out[o + 2] <= ny <= out[o + 3]
                    and out[o + 4] <= nv <= out[o + 5]
                    and out[o + 6] <= nth <= out[o + 7]):
                failures += 1
    return CheckResult("transformer-soundness", trials, failures,
                       time.perf_counter() - t0)


def sample_recoverable_states(n: int, rng: np.random.Generator,
                              p: PhysicalParams,
                              spec: BackupSpec) -> list[JointState]:
    """Rejection-sample joint states (human to move) certified recoverable."""
    states: list[JointState] = []
    attempts = 0
    limit = 400 * n + 1000
    while len(states) < n:
        attempts += 1
        if attempts > limit:
            raise RuntimeError(
                f"could not find {n} recoverable states in {limit} draws")
        r = rng.random(8)
        x = JointState(
            AgentState(-28.0 + 56.0 * r[0], -28.0 + 56.0 * r[1],
                       p.robot.v_max * r[2], -pi + 2.0 * pi * r[3]),
            AgentState(-28.0 + 56.0 * r[4], -28.0 + 56.0 * r[5],
                       p.human.v_max * r[6], -pi + 2.0 * pi * r[7]),
            Turn.HUMAN)
        if is_recoverable(x, spec, p):
            states.append(x)
    return states


def check_recoverability_soundness(states: int = 1000, rollouts: int = 100,
                                   seed: int = 0,
                                   p: PhysicalParams | None = None,
                                   spec: BackupSpec | None = None) -> CheckResult:
    """Certified states survive concrete backup play.

    For each certified state, the robot replays its backup schedule while the
    human samples arbitrary actions from the backup action box; every rollout
    must stay safe under both safety models and end with both agents at rest.
    """
    p = p or PhysicalParams()
    spec = spec or default_backup_spec()
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    pool = sample_recoverable_states(states, rng, p, spec)
    hb = spec.human_backup_set
    k = spec.horizon_k
    failures = 0
    joint = np.empty(8)
    for x in pool:
        ra = spec.robot_backup.schedule(x.robot, k, p)
        joint[:] = x.as_array()
        lo = (hb.phi.lo, hb.a.lo)
        width = (hb.phi.hi - hb.phi.lo, hb.a.hi - hb.a.lo)
        bad = 0
        for _ in range(rollouts):
            ha = lo + rng.random((k, 2)) * width
            code = rollout_concrete(
                joint, ra, ha, p.tau, p.robot.v_max, p.human.v_max, p.d_safe,
                p.robot.body_length, p.robot.body_width,
                p.human.body_length, p.human.body_width)
            if code != 0:
                bad += 1
        failures += bad
    return CheckResult("recoverability-soundness", states * rollouts, failures,
                       time.perf_counter() - t0)


def check_backend_parity(trials: int = 20_000, seed: int = 0,
                         p: PhysicalParams | None = None) -> CheckResult | None:
    """Bitwise agreement of the compiled and pure kernels, if both exist.

    Returns None when the compiled backend is unavailable.
    """
    from . import _kernels as disp
    from ._kernels import _pure
    try:
        from ._kernels import _core
    except ImportError:
        return None
    p = p or PhysicalParams()
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(trials):
        r = rng.random(10)
        x, y = -20.0 + 40.0 * r[0], -20.0 + 40.0 * r[1]
        v = p.robot.v_max * r[2]
        th = -pi + 2.0 * pi * r[3]
        phi = p.robot.phi_max * (2.0 * r[4] - 1.0)
        a = p.robot.a_max * (2.0 * r[5] - 1.0)
        if _pure.step_agent(x, y, v, th, phi, a, p.tau, p.robot.v_max) != \
                _core.step_agent(x, y, v, th, phi, a, p.tau, p.robot.v_max):
            failures += 1
        bx, by = x + 8.0 * (r[6] - 0.5), y + 8.0 * (r[7] - 0.5)
        bth = -pi + 2.0 * pi * r[8]
        pure_ov = _pure.rect_overlap(x, y, th, 2.0, 1.0, bx, by, bth, 2.0, 1.0)
        core_ov = _core.rect_overlap(x, y, th, 2.0, 1.0, bx, by, bth, 2.0, 1.0)
        if bool(pure_ov) != bool(core_ov):
            failures += 1
    return CheckResult("backend-parity", 2 * trials, failures,
                       time.perf_counter() - t0)


def run_all(transformer_trials: int = 100_000, isrec_states: int = 1000,
            isrec_rollouts: int = 100, seed: int = 0) -> list[CheckResult]:
    results = [
        check_transformer_soundness(transformer_trials, seed),
        check_recoverability_soundness(isrec_states, isrec_rollouts, seed),
    ]
    parity = check_backend_parity(seed=seed)
    if parity is not None:
        results.append(parity)
    return results
