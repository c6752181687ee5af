"""Shared test fixtures: terrains and scenario documents."""

from __future__ import annotations

import numpy as np
import pytest

from survey_bench.geodesy import Terrain
from survey_bench.scenario import scenario_from_dict


def flat_terrain_doc(height=100.0, origin=(-50.0, -50.0), cell=10.0, n=31):
    return {
        "format": 1,
        "origin": list(origin),
        "cell_size": cell,
        "n_rows": n,
        "n_cols": n,
        "heights": [height] * (n * n),
    }


def slope_terrain(grade_x=0.1, origin=(0.0, 0.0), cell=1.0, n=21, base=0.0):
    """Terrain z = base + grade_x * x, linear along east."""
    xs = origin[0] + np.arange(n) * cell
    heights = np.tile(base + grade_x * xs, (n, 1))
    return Terrain(origin=origin, cell_size=cell, heights=heights)


@pytest.fixture
def flat():
    return Terrain(
        origin=(0.0, 0.0), cell_size=1.0, heights=np.full((21, 21), 5.0)
    )


@pytest.fixture
def slope():
    return slope_terrain()


def leveling_scenario_doc(seed=7, noise_sd=0.0, grade_x=0.0):
    n = 31
    cell = 10.0
    x0 = -50.0
    heights = []
    for _ in range(n):
        heights.extend(100.0 + grade_x * (x0 + c * cell) for c in range(n))
    return {
        "format": 1,
        "id": "test-leveling",
        "seed": seed,
        "terrain": {
            "format": 1,
            "origin": [x0, -50.0],
            "cell_size": cell,
            "n_rows": n,
            "n_cols": n,
            "heights": heights,
        },
        "leveling": {
            "benchmark_a": {"id": "A", "x": 20.0, "y": 0.0, "z": 100.0},
            "benchmark_b": {"id": "B", "x": -20.0, "y": 0.0, "z": 100.0},
            "station": [0.0, 0.0],
            "noise_sd": noise_sd,
        },
    }


def flight_scenario_doc(seed=7):
    doc = {
        "format": 1,
        "id": "test-flight",
        "seed": seed,
        "terrain": flat_terrain_doc(height=0.0),
        "flight": {"origin": [0.0, 0.0], "altitude": 30.0},
    }
    return doc


@pytest.fixture
def leveling_scenario():
    return scenario_from_dict(leveling_scenario_doc())


@pytest.fixture
def flight_scenario():
    return scenario_from_dict(flight_scenario_doc())
