"""Benchmark the numba-compiled kernels against the pure-Python/numpy path.

With the default backend every kernel is an ``njit`` dispatcher whose
``py_func`` attribute is the uncompiled original, so both paths can be
timed in one process and checked for bit-identical output. Run:

    python benchmarks/bench_kernels.py
    SURVEY_BENCH_BACKEND=numpy python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from survey_bench._kernels import (  # noqa: E402
    BACKEND,
    arc_distance,
    bilinear_height,
    drone_step,
    polyline_distance,
    ses_scan,
)

rng = np.random.default_rng(12345)

HEIGHTS = rng.uniform(0.0, 30.0, size=(64, 64))
QUERIES = rng.uniform(0.0, 63.0, size=(200_000, 2))
STREAM = rng.normal(size=(200_000, 3))
SEED = np.zeros(3)
POLYLINE = np.array([[25.0 * i, 0.0, 30.0] for i in range(5)])
PROBES = rng.uniform(-10.0, 110.0, size=(200_000, 3))
DRONE_TICKS = 100_000


def bench_bilinear(fn):
    total = 0.0
    for x, y in QUERIES:
        total += fn(HEIGHTS, 0.0, 0.0, 1.0, x, y)
    return total


def bench_ses(fn):
    out = fn(STREAM, 0.2, SEED)
    return float(out[-1, 0])


def bench_polyline(fn):
    total = 0.0
    for x, y, z in PROBES:
        total += fn(x, y, z, POLYLINE)
    return total


def bench_arc(fn):
    total = 0.0
    for x, y, z in PROBES:
        total += fn(x, y, z, 0.0, 60.0, 30.0, 60.0, -np.pi / 2, np.pi / 2)
    return total


def bench_drone(fn):
    state = np.array([0, 0, 30, 0, 0, 0, 0, 0, 0, 3000, 1.0], dtype=np.float64)
    hits = 0
    for i in range(DRONE_TICKS):
        c = np.sin(i * 0.003)
        hits += fn(
            state, 0.5, 0.3 * c, -0.2 * c, 0.1, 0.02,
            0.5235987755982988, 0.15, 19.6133, 1.5707963267948966,
            0.3, 9.80665, 3000.0, 2.0e-7,
            HEIGHTS, -500.0, -500.0, 16.0,
        )
    return float(state[0]) + hits


CASES = [
    ("bilinear_height  (200k queries)", bilinear_height, bench_bilinear),
    ("ses_scan         (200k x 3 scan)", ses_scan, bench_ses),
    ("polyline_distance (200k probes)", polyline_distance, bench_polyline),
    ("arc_distance      (200k probes)", arc_distance, bench_arc),
    ("drone_step        (100k ticks)", drone_step, bench_drone),
]


def timed(workload, fn, repeats=3):
    best = np.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = workload(fn)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    print(f"active backend: {BACKEND}")
    if BACKEND != "numba":
        print("numba disabled; timing the pure-Python/numpy path only\n")
        for name, kernel, workload in CASES:
            elapsed, _ = timed(workload, kernel)
            print(f"{name:34s} numpy {elapsed * 1e3:9.2f} ms")
        return

    print(f"{'kernel':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}  identical")
    for name, kernel, workload in CASES:
        workload(kernel)  # JIT warm-up
        jit_time, jit_result = timed(workload, kernel)
        py_time, py_result = timed(workload, kernel.py_func)
        same = "yes" if jit_result == py_result else "NO"
        print(
            f"{name:34s} {jit_time * 1e3:8.2f}ms {py_time * 1e3:8.2f}ms "
            f"{py_time / jit_time:7.1f}x  {same}"
        )


if __name__ == "__main__":
    main()
