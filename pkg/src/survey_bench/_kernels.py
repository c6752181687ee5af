"""Hot numeric kernels with a numba backend and a pure-Python/numpy fallback.

Every kernel is written once as a plain scalar-loop function and compiled
with ``numba.njit`` when the numba backend is active. The fallback executes
the very same function object uncompiled, so both paths share one
definition and one operation order; on a given platform they produce
bit-identical results (checked by ``benchmarks/bench_kernels.py``).

Backend selection:
    SURVEY_BENCH_BACKEND=numba   (default) JIT-compile kernels
    SURVEY_BENCH_BACKEND=numpy   run the uncompiled fallback

State vector layout used by ``drone_step`` (float64[11]):
    0:x 1:y 2:z 3:vx 4:vy 5:vz 6:yaw 7:pitch 8:roll 9:rpm 10:battery
"""

from __future__ import annotations

import math
import os
import warnings

import numpy as np

BACKEND_ENV = "SURVEY_BENCH_BACKEND"


def _select_backend() -> str:
    choice = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(
            f"{BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:
            warnings.warn(
                "numba unavailable; falling back to the pure-numpy backend",
                RuntimeWarning,
                stacklevel=2,
            )
            return "numpy"
    return choice


BACKEND = _select_backend()

if BACKEND == "numba":
    from numba import njit

    def _jit(func):
        return njit(cache=True)(func)
else:

    def _jit(func):
        return func


# ---------------------------------------------------------------------------
# Terrain interpolation
# ---------------------------------------------------------------------------

@_jit
def bilinear_height(heights, x0, y0, cell, x, y):
    """Bilinear interpolation on a row-major grid; caller checks bounds.

    Queries that coincide bitwise with a node coordinate (x0 + i*cell)
    snap to a weight of exactly 0 or 1 so grid nodes reproduce their
    stored height bit-for-bit.
    """
    n_rows, n_cols = heights.shape

    u = (x - x0) / cell
    ci = int(math.floor(u))
    if ci > n_cols - 2:
        ci = n_cols - 2
    if ci < 0:
        ci = 0
    if x == x0 + ci * cell:
        fx = 0.0
    elif x == x0 + (ci + 1) * cell:
        fx = 1.0
    else:
        fx = u - ci
        if fx < 0.0:
            fx = 0.0
        elif fx > 1.0:
            fx = 1.0

    v = (y - y0) / cell
    ri = int(math.floor(v))
    if ri > n_rows - 2:
        ri = n_rows - 2
    if ri < 0:
        ri = 0
    if y == y0 + ri * cell:
        fy = 0.0
    elif y == y0 + (ri + 1) * cell:
        fy = 1.0
    else:
        fy = v - ri
        if fy < 0.0:
            fy = 0.0
        elif fy > 1.0:
            fy = 1.0

    h00 = heights[ri, ci]
    h10 = heights[ri, ci + 1]
    h01 = heights[ri + 1, ci]
    h11 = heights[ri + 1, ci + 1]
    return (
        h00 * (1.0 - fx) * (1.0 - fy)
        + h10 * fx * (1.0 - fy)
        + h01 * (1.0 - fx) * fy
        + h11 * fx * fy
    )


@_jit
def bilinear_height_clamped(heights, x0, y0, cell, x, y):
    """Bilinear interpolation with the query clamped onto the footprint."""
    n_rows, n_cols = heights.shape
    x_max = x0 + (n_cols - 1) * cell
    y_max = y0 + (n_rows - 1) * cell
    if x < x0:
        x = x0
    elif x > x_max:
        x = x_max
    if y < y0:
        y = y0
    elif y > y_max:
        y = y_max
    return bilinear_height(heights, x0, y0, cell, x, y)


# ---------------------------------------------------------------------------
# Exponential smoothing
# ---------------------------------------------------------------------------

@_jit
def ses_scan(raw, alpha, seed):
    """Recursive exponential smoothing over a (n_samples, n_axes) stream.

    ``seed`` is the pre-stream smoothed value; each row blends into the
    running value with factor ``alpha`` and the running value is emitted.
    """
    n, k = raw.shape
    out = np.empty_like(raw)
    prev = seed.copy()
    for i in range(n):
        for j in range(k):
            prev[j] = alpha * raw[i, j] + (1.0 - alpha) * prev[j]
            out[i, j] = prev[j]
    return out


# ---------------------------------------------------------------------------
# Path distance
# ---------------------------------------------------------------------------

@_jit
def polyline_distance(px, py, pz, pts):
    """Minimum 3-D distance from a point to a polyline (segment-wise)."""
    best = math.inf
    for i in range(pts.shape[0] - 1):
        ax = pts[i, 0]
        ay = pts[i, 1]
        az = pts[i, 2]
        dx = pts[i + 1, 0] - ax
        dy = pts[i + 1, 1] - ay
        dz = pts[i + 1, 2] - az
        seg2 = dx * dx + dy * dy + dz * dz
        t = ((px - ax) * dx + (py - ay) * dy + (pz - az) * dz) / seg2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        ex = px - (ax + t * dx)
        ey = py - (ay + t * dy)
        ez = pz - (az + t * dz)
        d2 = ex * ex + ey * ey + ez * ez
        if d2 < best:
            best = d2
    return math.sqrt(best)


@_jit
def arc_distance(px, py, pz, cx, cy, cz, radius, a0, span):
    """Minimum 3-D distance from a point to a horizontal circular arc.

    The arc lies at height ``cz``, centered on (cx, cy), sweeping from
    angle ``a0`` over ``span`` radians (0 < span <= 2*pi, counterclockwise).
    """
    rx = px - cx
    ry = py - cy
    dz = pz - cz
    phi = math.atan2(ry, rx)
    rel = (phi - a0) % (2.0 * math.pi)
    if rel <= span:
        rho = math.sqrt(rx * rx + ry * ry)
        dr = rho - radius
        return math.sqrt(dr * dr + dz * dz)
    a1 = a0 + span
    e0x = px - (cx + radius * math.cos(a0))
    e0y = py - (cy + radius * math.sin(a0))
    e1x = px - (cx + radius * math.cos(a1))
    e1y = py - (cy + radius * math.sin(a1))
    d0 = e0x * e0x + e0y * e0y + dz * dz
    d1 = e1x * e1x + e1y * e1y + dz * dz
    if d1 < d0:
        d0 = d1
    return math.sqrt(d0)


# ---------------------------------------------------------------------------
# Drone dynamics
# ---------------------------------------------------------------------------

@_jit
def drone_step(
    state,
    throttle,
    pitch_cmd,
    roll_cmd,
    yaw_rate_cmd,
    dt,
    max_tilt,
    tau_att,
    a_max,
    max_yaw_rate,
    drag,
    g,
    hover_rpm,
    battery_drain_per_rpm_s,
    heights,
    x0,
    y0,
    cell,
):
    """Advance the drone one fixed tick in place; returns 1 on ground contact.

    First-order attitude lag toward the commanded tilt, yaw-rate
    integration, thrust-tilt acceleration with linear drag, semi-implicit
    Euler integration, then terrain clamping. Operation order is pinned;
    do not reorder (replay bit-equality depends on it).
    """
    k = dt / tau_att
    state[7] += (pitch_cmd * max_tilt - state[7]) * k
    state[8] += (roll_cmd * max_tilt - state[8]) * k
    state[6] += yaw_rate_cmd * max_yaw_rate * dt

    fwd_x = math.cos(state[6])
    fwd_y = math.sin(state[6])
    a_fwd = g * math.tan(state[7])
    a_right = g * math.tan(state[8])
    ax = fwd_x * a_fwd + fwd_y * a_right - drag * state[3]
    ay = fwd_y * a_fwd - fwd_x * a_right - drag * state[4]
    az = throttle * a_max - g - drag * state[5]

    state[3] += ax * dt
    state[4] += ay * dt
    state[5] += az * dt
    state[0] += state[3] * dt
    state[1] += state[4] * dt
    state[2] += state[5] * dt

    state[9] = hover_rpm * (1.0 + throttle)
    state[10] -= state[9] * battery_drain_per_rpm_s * dt
    if state[10] < 0.0:
        state[10] = 0.0

    ground = bilinear_height_clamped(heights, x0, y0, cell, state[0], state[1])
    if state[2] < ground:
        state[2] = ground
        state[3] = 0.0
        state[4] = 0.0
        state[5] = 0.0
        return 1
    return 0


# Kernels exposed to the backend benchmark, keyed by public name.
KERNELS = {
    "bilinear_height": bilinear_height,
    "bilinear_height_clamped": bilinear_height_clamped,
    "ses_scan": ses_scan,
    "polyline_distance": polyline_distance,
    "arc_distance": arc_distance,
    "drone_step": drone_step,
}
