# cython: language_level=3
"""Compiled twins of the kernels in ``_pure.py``.

Arithmetic is kept in lockstep with the pure module (same operation order,
same libm calls) so the two backends produce bitwise-identical results.
See ``_pure.py`` for the array layout conventions and full docstrings.
"""

from libc.math cimport atan2, cos, fabs, sin, sqrt


cdef inline void _step(double* s, double phi, double a, double tau, double v_max) nogil:
    cdef double x = s[0]
    cdef double y = s[1]
    cdef double v = s[2]
    cdef double th = s[3]
    cdef double nv
    s[0] = x + v * cos(th) * tau
    s[1] = y + v * sin(th) * tau
    s[3] = th + v * phi * tau
    nv = v + a * tau
    if nv < 0.0:
        nv = 0.0
    elif nv > v_max:
        nv = v_max
    s[2] = nv


def step_agent(double x, double y, double v, double th, double phi, double a,
               double tau, double v_max):
    cdef double s[4]
    s[0] = x
    s[1] = y
    s[2] = v
    s[3] = th
    _step(s, phi, a, tau, v_max)
    return s[0], s[1], s[2], s[3]


cdef bint _rect_overlap(double ax, double ay, double ath, double al, double aw,
                        double bx, double by, double bth, double bl, double bw) nogil:
    cdef double dx = bx - ax
    cdef double dy = by - ay
    cdef double ca = cos(ath)
    cdef double sa = sin(ath)
    cdef double cb = cos(bth)
    cdef double sb = sin(bth)
    cdef double ahl = 0.5 * al
    cdef double ahw = 0.5 * aw
    cdef double bhl = 0.5 * bl
    cdef double bhw = 0.5 * bw
    cdef double axes[8]
    cdef double ux, uy, ra, rb
    cdef int i
    axes[0] = ca
    axes[1] = sa
    axes[2] = -sa
    axes[3] = ca
    axes[4] = cb
    axes[5] = sb
    axes[6] = -sb
    axes[7] = cb
    for i in range(4):
        ux = axes[2 * i]
        uy = axes[2 * i + 1]
        ra = ahl * fabs(ux * ca + uy * sa) + ahw * fabs(-ux * sa + uy * ca)
        rb = bhl * fabs(ux * cb + uy * sb) + bhw * fabs(-ux * sb + uy * cb)
        if fabs(dx * ux + dy * uy) >= ra + rb:
            return False
    return True


def rect_overlap(double ax, double ay, double ath, double al, double aw,
                 double bx, double by, double bth, double bl, double bw):
    return bool(_rect_overlap(ax, ay, ath, al, aw, bx, by, bth, bl, bw))


cdef void _box_agent_step(double* box, int o, double* u, double tau,
                          double v_max, double* out) nogil:
    cdef double v_hi = box[o + 5]
    cdef double phi_lo = u[0]
    cdef double phi_hi = u[1]
    cdef double m = fabs(phi_lo)
    cdef double e, te, nv_lo, nv_hi
    if fabs(phi_hi) > m:
        m = fabs(phi_hi)
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


cdef void _abstract_step(double* box, double* ur, double* uh, double tau,
                         double v_max_r, double v_max_h, double* out) nogil:
    _box_agent_step(box, 0, ur, tau, v_max_r, out)
    _box_agent_step(box, 8, uh, tau, v_max_h, out)


def abstract_step(double[::1] box, double[::1] ur, double[::1] uh,
                  double tau, double v_max_r, double v_max_h, double[::1] out):
    _abstract_step(&box[0], &ur[0], &uh[0], tau, v_max_r, v_max_h, &out[0])


cdef double _box_min_center_dist(double* box) nogil:
    cdef double gx = box[8] - box[1]
    cdef double g = box[0] - box[9]
    cdef double gy
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


def box_min_center_dist(double[::1] box):
    return _box_min_center_dist(&box[0])


cdef bint _stops_in_zone(double x, double y, double v, double th,
                         double brake_rate, double tau, double v_max,
                         double[:, ::1] zones, double body_l, double body_w) nogil:
    cdef double sx = x
    cdef double sy = y
    cdef double sv = v
    cdef double cx, cy, zl, zw
    cdef int i
    cdef int n = zones.shape[0]
    while sv > 0.0:
        sx = sx + sv * cos(th) * tau
        sy = sy + sv * sin(th) * tau
        sv = sv - brake_rate * tau
    for i in range(n):
        cx = 0.5 * (zones[i, 0] + zones[i, 2])
        cy = 0.5 * (zones[i, 1] + zones[i, 3])
        zl = zones[i, 2] - zones[i, 0]
        zw = zones[i, 3] - zones[i, 1]
        if _rect_overlap(sx, sy, th, body_l, body_w, cx, cy, 0.0, zl, zw):
            return True
    return False


def backup_schedule(double[::1] state, int kind, int k, double tau, double v_max,
                    double phi_max, double brake_rate, double target_y,
                    double steer_gain, double heading_gain, double pass_speed,
                    double[:, ::1] zones, double body_l, double body_w,
                    double[:, ::1] out):
    cdef double s[4]
    cdef double phi, a, err
    cdef int t
    s[0] = state[0]
    s[1] = state[1]
    s[2] = state[2]
    s[3] = state[3]
    for t in range(k):
        if kind == 0:
            phi = 0.0
            a = -brake_rate
        elif kind == 1:
            err = steer_gain * (target_y - s[1]) + heading_gain * atan2(sin(0.0 - s[3]), cos(0.0 - s[3]))
            if err < -phi_max:
                err = -phi_max
            elif err > phi_max:
                err = phi_max
            phi = err
            a = -brake_rate
        else:
            if _stops_in_zone(s[0], s[1], s[2], s[3], brake_rate, tau, v_max,
                              zones, body_l, body_w):
                phi = 0.0
                a = brake_rate if s[2] < pass_speed else 0.0
            else:
                phi = 0.0
                a = -brake_rate
        out[t, 0] = phi
        out[t, 1] = a
        _step(s, phi, a, tau, v_max)


def is_recoverable_raw(double[::1] state, double[:, ::1] sched, double[::1] uh,
                       double tau, double v_max_r, double v_max_h, double safe_dist):
    cdef double buf_a[16]
    cdef double buf_b[16]
    cdef double ur[4]
    cdef double* box = buf_a
    cdef double* nxt = buf_b
    cdef double* swp
    cdef int t, i
    cdef int k = sched.shape[0]
    for i in range(8):
        box[2 * i] = state[i]
        box[2 * i + 1] = state[i]
    for t in range(k):
        if _box_min_center_dist(box) < safe_dist:
            return False
        if box[4] == 0.0 and box[5] == 0.0 and box[12] == 0.0 and box[13] == 0.0:
            return True
        ur[0] = sched[t, 0]
        ur[1] = sched[t, 0]
        ur[2] = sched[t, 1]
        ur[3] = sched[t, 1]
        _abstract_step(box, ur, &uh[0], tau, v_max_r, v_max_h, nxt)
        swp = box
        box = nxt
        nxt = swp
    return bool(box[4] == 0.0 and box[5] == 0.0 and box[12] == 0.0 and box[13] == 0.0
                and _box_min_center_dist(box) >= safe_dist)


cdef inline bint _pair_safe(double xr, double yr, double tr,
                            double xh, double yh, double th_,
                            double d_safe, double rl, double rw,
                            double hl, double hw) nogil:
    cdef double ddx = xh - xr
    cdef double ddy = yh - yr
    if sqrt(ddx * ddx + ddy * ddy) < d_safe:
        return False
    return not _rect_overlap(xr, yr, tr, rl, rw, xh, yh, th_, hl, hw)


def rollout_concrete(double[::1] state, double[:, ::1] ra, double[:, ::1] ha,
                     double tau, double v_max_r, double v_max_h,
                     double d_safe, double rl, double rw, double hl, double hw):
    cdef double r[4]
    cdef double h[4]
    cdef int t
    cdef int k = ra.shape[0]
    r[0] = state[0]
    r[1] = state[1]
    r[2] = state[2]
    r[3] = state[3]
    h[0] = state[4]
    h[1] = state[5]
    h[2] = state[6]
    h[3] = state[7]
    if not _pair_safe(r[0], r[1], r[3], h[0], h[1], h[3], d_safe, rl, rw, hl, hw):
        return 1
    for t in range(k):
        _step(h, ha[t, 0], ha[t, 1], tau, v_max_h)
        if not _pair_safe(r[0], r[1], r[3], h[0], h[1], h[3], d_safe, rl, rw, hl, hw):
            return 1
        _step(r, ra[t, 0], ra[t, 1], tau, v_max_r)
        if not _pair_safe(r[0], r[1], r[3], h[0], h[1], h[3], d_safe, rl, rw, hl, hw):
            return 1
    if r[2] != 0.0 or h[2] != 0.0:
        return 2
    return 0


def cem_scores(double[::1] rstate, double[::1] hstate, double[:, :, ::1] acts,
               double tau, double v_max, double px, double py,
               double wx, double wy, double progress_w, double track_w,
               double penalty, double radius, double[:, ::1] walls,
               double wall_clear, double[::1] out):
    cdef double hx0 = hstate[0]
    cdef double hy0 = hstate[1]
    cdef double hvx = hstate[2] * cos(hstate[3])
    cdef double hvy = hstate[2] * sin(hstate[3])
    cdef double dx0 = wx - rstate[0]
    cdef double dy0 = wy - rstate[1]
    cdef double d0 = sqrt(dx0 * dx0 + dy0 * dy0)
    cdef double ex = wx - px
    cdef double ey = wy - py
    cdef double el = sqrt(ex * ex + ey * ey)
    cdef double ux = 0.0
    cdef double uy = 0.0
    if el > 1e-9:
        ux = ex / el
        uy = ey / el
    cdef double r2 = radius * radius
    cdef double wc2 = wall_clear * wall_clear
    cdef int nw = walls.shape[0]
    cdef int pop = acts.shape[0]
    cdef int horizon = acts.shape[1]
    cdef double s[4]
    cdef double ft, ddx, ddy, dxe, dye, e, lat, d2, viol, sx, sy, den, t, hit
    cdef int i, j, w
    for i in range(pop):
        s[0] = rstate[0]
        s[1] = rstate[1]
        s[2] = rstate[2]
        s[3] = rstate[3]
        viol = 0.0
        lat = 0.0
        for j in range(horizon):
            _step(s, acts[i, j, 0], acts[i, j, 1], tau, v_max)
            ft = (j + 1) * tau
            ddx = s[0] - (hx0 + hvx * ft)
            ddy = s[1] - (hy0 + hvy * ft)
            d2 = ddx * ddx + ddy * ddy
            if d2 < r2:
                viol = viol + (r2 - d2) / r2
            for w in range(nw):
                sx = walls[w, 2] - walls[w, 0]
                sy = walls[w, 3] - walls[w, 1]
                den = sx * sx + sy * sy
                t = 0.0
                if den > 0.0:
                    t = ((s[0] - walls[w, 0]) * sx + (s[1] - walls[w, 1]) * sy) / den
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                ddx = s[0] - (walls[w, 0] + t * sx)
                ddy = s[1] - (walls[w, 1] + t * sy)
                d2 = ddx * ddx + ddy * ddy
                if d2 < wc2:
                    viol = viol + (wc2 - d2) / wc2
            if el > 1e-9:
                e = ux * (s[1] - py) - uy * (s[0] - px)
            else:
                ddx = s[0] - wx
                ddy = s[1] - wy
                e = sqrt(ddx * ddx + ddy * ddy)
            lat = lat + e * e
        dxe = wx - s[0]
        dye = wy - s[1]
        hit = 1.0 if viol > 0.0 else 0.0
        out[i] = (progress_w * (d0 - sqrt(dxe * dxe + dye * dye))
                  - track_w * lat - penalty * (hit + 0.01 * viol))
