"""Differential leveling: rod readings, height of instrument, grading.

The exercise transfers elevation from a known benchmark A to an unknown
point B: a backsight on A gives the height of instrument, a foresight on B
gives B's elevation. Grading compares the computed elevation against the
scenario's ground truth as a relative error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotLevel, RodOutOfRange, WrongTarget, ZeroTrueElevation
from .geodesy import Benchmark

BACKSIGHT = "backsight"
FORESIGHT = "foresight"

DEFAULT_ROD_HEIGHT_MAX = 4.0


@dataclass(frozen=True)
class LevelingExercise:
    """One A-to-B leveling problem; B's true elevation is the grading key."""

    benchmark_a: Benchmark
    benchmark_b: Benchmark
    instrument_station: tuple[float, float]
    rod_height_max: float = DEFAULT_ROD_HEIGHT_MAX

    def __post_init__(self):
        if not self.benchmark_a.elevation_known:
            raise ValueError("benchmark A must have a known elevation")
        if self.benchmark_a.id == self.benchmark_b.id:
            raise ValueError("benchmarks A and B must be distinct")
        a = self.benchmark_a.position
        b = self.benchmark_b.position
        if (a.x, a.y) == (b.x, b.y):
            raise ValueError("benchmark positions must be distinct")
        if not (self.rod_height_max > 0):
            raise ValueError("rod_height_max must be > 0")


@dataclass(frozen=True)
class SightReading:
    """A rod reading of a given kind, taken on a named benchmark."""

    kind: str
    value: float
    target: str
    taken_at: float

    def __post_init__(self):
        if self.kind not in (BACKSIGHT, FORESIGHT):
            raise ValueError(f"unknown sight kind {self.kind!r}")
        if self.value < 0:
            raise ValueError("rod readings cannot be negative")


@dataclass(frozen=True)
class LevelingResult:
    """Graded outcome of one leveling attempt."""

    hi: float
    computed_elevation_b: float
    true_elevation_b: float
    error: float


def simulated_rod_reading(
    instrument_hi: float,
    rod_base_elevation: float,
    noise_sd: float = 0.0,
    rng: np.random.Generator | None = None,
    rod_height_max: float = DEFAULT_ROD_HEIGHT_MAX,
    instrument_level: bool = True,
) -> float:
    """Rod value seen through a level line of sight: HI minus rod base elevation.

    Readings are refused while the instrument is unleveled (hard error, not
    degraded accuracy) and when the line of sight misses the rod. Optional
    Gaussian noise comes from the session's seeded generator; the noisy
    value is clamped onto the rod.
    """
    if not instrument_level:
        raise NotLevel("instrument must be leveled before taking a reading")
    geometric = instrument_hi - rod_base_elevation
    if geometric < 0 or geometric > rod_height_max:
        raise RodOutOfRange(
            f"line of sight at {geometric:.3f} m misses the rod "
            f"[0, {rod_height_max}] m"
        )
    if noise_sd > 0.0:
        if rng is None:
            raise ValueError("noisy readings need the session's generator")
        noisy = geometric + noise_sd * float(rng.standard_normal())
        return min(max(noisy, 0.0), rod_height_max)
    return geometric


def height_of_instrument(elev_a: float, bs: float) -> float:
    """Height of instrument: known elevation plus the backsight reading."""
    return elev_a + bs


def elevation_from_foresight(hi: float, fs: float) -> float:
    """Elevation of the sighted point: HI minus the foresight reading."""
    return hi - fs


def elevation_error(h_comp: float, h_act: float) -> float:
    """Relative elevation error |(computed - actual) / actual|."""
    if h_act == 0:
        raise ZeroTrueElevation(
            "relative error is undefined for a true elevation of 0"
        )
    return abs((h_comp - h_act) / h_act)


def grade_exercise(
    exercise: LevelingExercise, bs: SightReading, fs: SightReading
) -> LevelingResult:
    """Grade one attempt from its backsight and foresight readings."""
    if bs.kind != BACKSIGHT or bs.target != exercise.benchmark_a.id:
        raise WrongTarget(
            f"backsight must target {exercise.benchmark_a.id!r}, "
            f"got {bs.kind} on {bs.target!r}"
        )
    if fs.kind != FORESIGHT or fs.target != exercise.benchmark_b.id:
        raise WrongTarget(
            f"foresight must target {exercise.benchmark_b.id!r}, "
            f"got {fs.kind} on {fs.target!r}"
        )
    for reading in (bs, fs):
        if reading.value > exercise.rod_height_max:
            raise RodOutOfRange(
                f"{reading.kind} {reading.value} exceeds the "
                f"{exercise.rod_height_max} m rod"
            )
    hi = height_of_instrument(exercise.benchmark_a.position.z, bs.value)
    computed = elevation_from_foresight(hi, fs.value)
    true_b = exercise.benchmark_b.position.z
    return LevelingResult(
        hi=hi,
        computed_elevation_b=computed,
        true_elevation_b=true_b,
        error=elevation_error(computed, true_b),
    )
