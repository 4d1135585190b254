"""Scalar reference implementations of the simulation kernels.

Every function here has a compiled twin in ``_core.pyx`` with identical
arithmetic (same operation order, same libm calls), so both backends produce
bitwise-identical trajectories.  Keep the two files in lockstep when editing.

Array layouts used throughout:

* agent state:  ``(x, y, v, theta)``
* joint state:  ``[xr, yr, vr, thr, xh, yh, vh, thh]``            (length 8)
* state box:    per agent ``x_lo, x_hi, y_lo, y_hi, v_lo, v_hi,
  th_lo, th_hi``, robot first                                      (length 16)
* action:       ``(phi, a)``
* action box:   ``[phi_lo, phi_hi, a_lo, a_hi]``                   (length 4)
"""

from __future__ import annotations

from math import atan2, cos, sin, sqrt


def step_agent(x, y, v, th, phi, a, tau, v_max):
    """One explicit-Euler move: positions and heading use the pre-step speed."""
    nx = x + v * cos(th) * tau
    ny = y + v * sin(th) * tau
    nth = th + v * phi * tau
    nv = v + a * tau
    if nv < 0.0:
        nv = 0.0
    elif nv > v_max:
        nv = v_max
    return nx, ny, nv, nth


def rect_overlap(ax, ay, ath, al, aw, bx, by, bth, bl, bw):
    """Strict interior intersection of two oriented rectangles (SAT, 4 axes).

    Touching boundaries do not count as overlap.
    """
    dx = bx - ax
    dy = by - ay
    ca = cos(ath)
    sa = sin(ath)
    cb = cos(bth)
    sb = sin(bth)
    ahl = 0.5 * al
    ahw = 0.5 * aw
    bhl = 0.5 * bl
    bhw = 0.5 * bw
    # candidate separating axes: both rectangles' long and lateral directions
    for ux, uy in ((ca, sa), (-sa, ca), (cb, sb), (-sb, cb)):
        ra = ahl * abs(ux * ca + uy * sa) + ahw * abs(-ux * sa + uy * ca)
        rb = bhl * abs(ux * cb + uy * sb) + bhw * abs(-ux * sb + uy * cb)
        if abs(dx * ux + dy * uy) >= ra + rb:
            return False
    return True


def _box_agent_step(box, o, u, tau, v_max, out):
    # one agent's interval image; positions grow by the speed bound,
    # heading by the worst steering magnitude, speed shifts by the accel box
    v_hi = box[o + 5]
    phi_lo = u[0]
    phi_hi = u[1]
    m = abs(phi_lo)
    if abs(phi_hi) > m:
        m = abs(phi_hi)
    e = v_hi * tau
    out[o] = box[o] - e
    out[o + 1] = box[o + 1] + e
    out[o + 2] = box[o + 2] - e
    out[o + 3] = box[o + 3] + e
    nv_lo = box[o + 4] + u[2] * tau
    if nv_lo < 0.0:
        nv_lo = 0.0
    elif nv_lo > v_max:
        nv_lo = v_max
    nv_hi = v_hi + u[3] * tau
    if nv_hi < 0.0:
        nv_hi = 0.0
    elif nv_hi > v_max:
        nv_hi = v_max
    out[o + 4] = nv_lo
    out[o + 5] = nv_hi
    te = v_hi * m * tau
    out[o + 6] = box[o + 6] - te
    out[o + 7] = box[o + 7] + te


def abstract_step(box, ur, uh, tau, v_max_r, v_max_h, out):
    """Interval image of one full round (both agents move once)."""
    _box_agent_step(box, 0, ur, tau, v_max_r, out)
    _box_agent_step(box, 8, uh, tau, v_max_h, out)


def box_min_center_dist(box):
    """Smallest center distance any pair of states in the box can realize."""
    gx = box[8] - box[1]
    g = box[0] - box[9]
    if g > gx:
        gx = g
    if gx < 0.0:
        gx = 0.0
    gy = box[10] - box[3]
    g = box[2] - box[11]
    if g > gy:
        gy = g
    if gy < 0.0:
        gy = 0.0
    return sqrt(gx * gx + gy * gy)


def _stops_in_zone(x, y, v, th, brake_rate, tau, v_max, zones, body_l, body_w):
    # where would a straight-line constant brake from here come to rest,
    # and would the body rectangle overlap a no-stop zone there?
    sx = x
    sy = y
    sv = v
    while sv > 0.0:
        sx = sx + sv * cos(th) * tau
        sy = sy + sv * sin(th) * tau
        sv = sv - brake_rate * tau
    n = zones.shape[0]
    for i in range(n):
        cx = 0.5 * (zones[i, 0] + zones[i, 2])
        cy = 0.5 * (zones[i, 1] + zones[i, 3])
        zl = zones[i, 2] - zones[i, 0]
        zw = zones[i, 3] - zones[i, 1]
        if rect_overlap(sx, sy, th, body_l, body_w, cx, cy, 0.0, zl, zw):
            return True
    return False


def backup_schedule(state, kind, k, tau, v_max, phi_max, brake_rate,
                    target_y, steer_gain, heading_gain, pass_speed,
                    zones, body_l, body_w, out):
    """Simulate a backup rule from a concrete robot state, recording k actions.

    kind 0: constant straight-line brake.
    kind 1: pull toward the lane ``y = target_y`` (road axis +x) while braking.
    kind 2: brake unless the stop footprint would rest inside a no-stop zone;
            in that case keep driving (up to ``pass_speed``) until clear.
    """
    x = state[0]
    y = state[1]
    v = state[2]
    th = state[3]
    for t in range(k):
        if kind == 0:
            phi = 0.0
            a = -brake_rate
        elif kind == 1:
            err = steer_gain * (target_y - y) + heading_gain * atan2(sin(0.0 - th), cos(0.0 - th))
            if err < -phi_max:
                err = -phi_max
            elif err > phi_max:
                err = phi_max
            phi = err
            a = -brake_rate
        else:
            if _stops_in_zone(x, y, v, th, brake_rate, tau, v_max, zones, body_l, body_w):
                phi = 0.0
                a = brake_rate if v < pass_speed else 0.0
            else:
                phi = 0.0
                a = -brake_rate
        out[t, 0] = phi
        out[t, 1] = a
        x, y, v, th = step_agent(x, y, v, th, phi, a, tau, v_max)


def is_recoverable_raw(state, sched, uh, tau, v_max_r, v_max_h, safe_dist):
    """Abstract k-round rollout: robot plays the schedule, human the backup box.

    True iff every intermediate box keeps the safe center distance and the
    final box is an equilibrium (both speed intervals exactly [0, 0]).
    Early exit on equilibrium is exact: with braking-only actions ahead, an
    equilibrium box never changes again.
    """
    box = [
        state[0], state[0], state[1], state[1], state[2], state[2], state[3], state[3],
        state[4], state[4], state[5], state[5], state[6], state[6], state[7], state[7],
    ]
    nxt = [0.0] * 16
    ur = [0.0] * 4
    k = sched.shape[0]
    for t in range(k):
        if box_min_center_dist(box) < safe_dist:
            return False
        if box[4] == 0.0 and box[5] == 0.0 and box[12] == 0.0 and box[13] == 0.0:
            return True
        ur[0] = sched[t, 0]
        ur[1] = sched[t, 0]
        ur[2] = sched[t, 1]
        ur[3] = sched[t, 1]
        abstract_step(box, ur, uh, tau, v_max_r, v_max_h, nxt)
        box, nxt = nxt, box
    return (box[4] == 0.0 and box[5] == 0.0 and box[12] == 0.0 and box[13] == 0.0
            and box_min_center_dist(box) >= safe_dist)


def _pair_safe(xr, yr, tr, xh, yh, th_, d_safe, rl, rw, hl, hw):
    ddx = xh - xr
    ddy = yh - yr
    if sqrt(ddx * ddx + ddy * ddy) < d_safe:
        return False
    return not rect_overlap(xr, yr, tr, rl, rw, xh, yh, th_, hl, hw)


def rollout_concrete(state, ra, ha, tau, v_max_r, v_max_h, d_safe, rl, rw, hl, hw):
    """Concrete alternating rollout from a post-robot state (human moves first).

    Safety here is the conjunction of both models (center distance and
    rectangle disjointness).  Returns 0 if every half-round state is safe and
    both agents end at rest, 1 on a safety violation, 2 if not at rest.
    """
    xr = state[0]
    yr = state[1]
    vr = state[2]
    tr = state[3]
    xh = state[4]
    yh = state[5]
    vh = state[6]
    th_ = state[7]
    if not _pair_safe(xr, yr, tr, xh, yh, th_, d_safe, rl, rw, hl, hw):
        return 1
    k = ra.shape[0]
    for t in range(k):
        xh, yh, vh, th_ = step_agent(xh, yh, vh, th_, ha[t, 0], ha[t, 1], tau, v_max_h)
        if not _pair_safe(xr, yr, tr, xh, yh, th_, d_safe, rl, rw, hl, hw):
            return 1
        xr, yr, vr, tr = step_agent(xr, yr, vr, tr, ra[t, 0], ra[t, 1], tau, v_max_r)
        if not _pair_safe(xr, yr, tr, xh, yh, th_, d_safe, rl, rw, hl, hw):
            return 1
    if vr != 0.0 or vh != 0.0:
        return 2
    return 0


def cem_scores(rstate, hstate, acts, tau, v_max, px, py, wx, wy,
               progress_w, track_w, penalty, radius, walls, wall_clear, out):
    """Score candidate action sequences against a constant-velocity forecast.

    Score = progress_w * (reduction in distance to the waypoint), minus
    track_w times the accumulated squared lateral deviation from the route
    leg (px,py)->(wx,wy), minus a flat penalty if any step enters the
    ``radius`` disk around the forecast or the ``wall_clear`` band around a
    wall segment.  A small fraction of the penalty scales with accumulated
    incursion depth ((limit^2 - d^2) / limit^2 per step inside) so that
    when every candidate violates, the ones that back away still rank
    above the ones that push in.  ``walls`` is an (m, 4) array of segment
    endpoints.
    """
    hx0 = hstate[0]
    hy0 = hstate[1]
    hvx = hstate[2] * cos(hstate[3])
    hvy = hstate[2] * sin(hstate[3])
    dx0 = wx - rstate[0]
    dy0 = wy - rstate[1]
    d0 = sqrt(dx0 * dx0 + dy0 * dy0)
    ex = wx - px
    ey = wy - py
    el = sqrt(ex * ex + ey * ey)
    if el > 1e-9:
        ux = ex / el
        uy = ey / el
    else:
        ux = 0.0
        uy = 0.0
    r2 = radius * radius
    wc2 = wall_clear * wall_clear
    nw = walls.shape[0]
    pop = acts.shape[0]
    horizon = acts.shape[1]
    for i in range(pop):
        x = rstate[0]
        y = rstate[1]
        v = rstate[2]
        th = rstate[3]
        viol = 0.0
        lat = 0.0
        for j in range(horizon):
            x, y, v, th = step_agent(x, y, v, th, acts[i, j, 0], acts[i, j, 1], tau, v_max)
            ft = (j + 1) * tau
            ddx = x - (hx0 + hvx * ft)
            ddy = y - (hy0 + hvy * ft)
            d2 = ddx * ddx + ddy * ddy
            if d2 < r2:
                viol = viol + (r2 - d2) / r2
            for s in range(nw):
                sx = walls[s, 2] - walls[s, 0]
                sy = walls[s, 3] - walls[s, 1]
                den = sx * sx + sy * sy
                t = 0.0
                if den > 0.0:
                    t = ((x - walls[s, 0]) * sx + (y - walls[s, 1]) * sy) / den
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                ddx = x - (walls[s, 0] + t * sx)
                ddy = y - (walls[s, 1] + t * sy)
                d2 = ddx * ddx + ddy * ddy
                if d2 < wc2:
                    viol = viol + (wc2 - d2) / wc2
            if el > 1e-9:
                e = ux * (y - py) - uy * (x - px)
            else:
                ddx = x - wx
                ddy = y - wy
                e = sqrt(ddx * ddx + ddy * ddy)
            lat = lat + e * e
        dxe = wx - x
        dye = wy - y
        hit = 1.0 if viol > 0.0 else 0.0
        out[i] = (progress_w * (d0 - sqrt(dxe * dxe + dye * dye))
                  - track_w * lat - penalty * (hit + 0.01 * viol))
