"""Scenario files: everything a session needs, in one versioned document.

A scenario bundles the terrain, the exercise definitions, filter
parameters, physics constants, and the determinism seed. Sessions never
read anything else, so (scenario, seed, input trace) fully determines a
run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ScenarioError
from .flight import DEFAULT_CAPTURE_RADIUS, FlightParams
from .geodesy import Benchmark, Terrain, WorldPoint, load_terrain_file
from .instrument import LEG_MAX, LEG_MIN, TripodConfig
from .leveling import DEFAULT_ROD_HEIGHT_MAX, LevelingExercise
from .smoothing import DEFAULT_ALPHA, DEFAULT_DEADZONE

SCENARIO_FORMAT = 1

# Height of the sight line above the settled tripod head plate.
DEFAULT_INSTRUMENT_OFFSET = 0.3

# Screw travel per click of the console's +/- controls.
DEFAULT_SCREW_STEP_MM = 0.1


@dataclass(frozen=True)
class LevelingSpec:
    """Leveling exercise definition plus the initial tripod placement."""

    exercise: LevelingExercise
    tripod: TripodConfig
    noise_sd: float = 0.0
    instrument_offset: float = DEFAULT_INSTRUMENT_OFFSET


@dataclass(frozen=True)
class FlightSpec:
    """Waypoint-trailing exercise definition."""

    origin: WorldPoint
    capture_radius: float = DEFAULT_CAPTURE_RADIUS


@dataclass(frozen=True)
class Scenario:
    """Resolved scenario; all references loaded, ready to run."""

    id: str
    seed: int
    terrain: Terrain
    filter_alpha: float = DEFAULT_ALPHA
    filter_deadzone: float = DEFAULT_DEADZONE
    physics: FlightParams = field(default_factory=FlightParams)
    leveling: LevelingSpec | None = None
    flight: FlightSpec | None = None
    screw_step_mm: float = DEFAULT_SCREW_STEP_MM
    raw_doc: dict | None = None


def _require(doc: dict, key: str, context: str):
    if key not in doc:
        raise ScenarioError(f"{context}: missing {key!r}")
    return doc[key]


def _benchmark(doc: dict, known: bool, context: str) -> Benchmark:
    try:
        return Benchmark(
            id=str(_require(doc, "id", context)),
            position=WorldPoint(
                float(_require(doc, "x", context)),
                float(_require(doc, "y", context)),
                float(_require(doc, "z", context)),
            ),
            elevation_known=known,
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{context}: {exc}") from exc


def scenario_from_dict(doc: dict, base_dir: Path | None = None) -> Scenario:
    """Build a Scenario from its parsed document.

    ``base_dir`` resolves a relative terrain file reference.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    if doc.get("format") != SCENARIO_FORMAT:
        raise ScenarioError(f"unsupported scenario format {doc.get('format')!r}")
    scenario_id = str(_require(doc, "id", "scenario"))
    seed = _require(doc, "seed", "scenario")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("scenario: seed must be an integer")

    terrain_doc = _require(doc, "terrain", "scenario")
    if isinstance(terrain_doc, dict) and "file" in terrain_doc:
        path = Path(terrain_doc["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        terrain = load_terrain_file(path)
    else:
        terrain = Terrain.from_dict(terrain_doc)

    filt = doc.get("filter", {})
    alpha = float(filt.get("alpha", DEFAULT_ALPHA))
    deadzone = float(filt.get("deadzone_mps", DEFAULT_DEADZONE))
    if not (0.0 < alpha <= 1.0):
        raise ScenarioError(f"filter.alpha must be in (0, 1], got {alpha}")
    if deadzone < 0:
        raise ScenarioError("filter.deadzone_mps must be >= 0")

    physics_doc = doc.get("physics", {})
    try:
        physics = FlightParams(**physics_doc)
    except TypeError as exc:
        raise ScenarioError(f"physics: {exc}") from exc

    leveling = None
    if "leveling" in doc:
        lev = doc["leveling"]
        bench_a = _benchmark(
            _require(lev, "benchmark_a", "leveling"), True, "leveling.benchmark_a"
        )
        bench_b = _benchmark(
            _require(lev, "benchmark_b", "leveling"), False, "leveling.benchmark_b"
        )
        station = _require(lev, "station", "leveling")
        tripod_doc = lev.get("tripod", {})
        try:
            exercise = LevelingExercise(
                benchmark_a=bench_a,
                benchmark_b=bench_b,
                instrument_station=(float(station[0]), float(station[1])),
                rod_height_max=float(
                    lev.get("rod_height_max", DEFAULT_ROD_HEIGHT_MAX)
                ),
            )
            tripod = TripodConfig(
                center=exercise.instrument_station,
                heading=float(tripod_doc.get("heading", 0.0)),
                leg_lengths=tuple(tripod_doc.get("legs", (1.2, 1.2, 1.2))),
                leg_splay_radius=float(tripod_doc.get("splay_radius", 0.5)),
            )
        except (TypeError, ValueError, IndexError) as exc:
            raise ScenarioError(f"leveling: {exc}") from exc
        noise_sd = float(lev.get("noise_sd", 0.0))
        if noise_sd < 0:
            raise ScenarioError("leveling.noise_sd must be >= 0")
        if bench_b.position.z == 0:
            # relative grading error is undefined at a true elevation of 0
            raise ScenarioError("leveling.benchmark_b.z must be nonzero")
        leveling = LevelingSpec(
            exercise=exercise,
            tripod=tripod,
            noise_sd=noise_sd,
            instrument_offset=float(
                lev.get("instrument_offset", DEFAULT_INSTRUMENT_OFFSET)
            ),
        )

    flight = None
    if "flight" in doc:
        fl = doc["flight"]
        origin_xy = _require(fl, "origin", "flight")
        try:
            flight = FlightSpec(
                origin=WorldPoint(
                    float(origin_xy[0]),
                    float(origin_xy[1]),
                    float(fl.get("altitude", 30.0)),
                ),
                capture_radius=float(
                    fl.get("capture_radius", DEFAULT_CAPTURE_RADIUS)
                ),
            )
        except (TypeError, ValueError, IndexError) as exc:
            raise ScenarioError(f"flight: {exc}") from exc
        if flight.capture_radius <= 0:
            raise ScenarioError("flight.capture_radius must be > 0")

    screw_step = float(doc.get("screw_step_mm", DEFAULT_SCREW_STEP_MM))
    if screw_step <= 0:
        raise ScenarioError("screw_step_mm must be > 0")

    scenario = Scenario(
        id=scenario_id,
        seed=seed,
        terrain=terrain,
        filter_alpha=alpha,
        filter_deadzone=deadzone,
        physics=physics,
        leveling=leveling,
        flight=flight,
        screw_step_mm=screw_step,
        raw_doc=doc,
    )
    _check_geometry(scenario)
    return scenario


def _check_geometry(scenario: Scenario) -> None:
    """Cross-checks that need the resolved terrain."""
    terrain = scenario.terrain
    if scenario.leveling is not None:
        lev = scenario.leveling
        cx, cy = lev.tripod.center
        reach = lev.tripod.leg_splay_radius
        for x, y, what in (
            (cx - reach, cy - reach, "tripod footprint"),
            (cx + reach, cy + reach, "tripod footprint"),
            (lev.exercise.benchmark_a.position.x,
             lev.exercise.benchmark_a.position.y, "benchmark A"),
            (lev.exercise.benchmark_b.position.x,
             lev.exercise.benchmark_b.position.y, "benchmark B"),
        ):
            if not terrain.contains(x, y):
                raise ScenarioError(f"{what} lies outside the terrain")
    if scenario.flight is not None:
        origin = scenario.flight.origin
        if not terrain.contains(origin.x, origin.y):
            raise ScenarioError("flight origin lies outside the terrain")
        if origin.z <= terrain.elevation_at(origin.x, origin.y):
            raise ScenarioError("flight altitude must clear the terrain")


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(doc, base_dir=path.parent)


def validate_scenario_file(path: str | Path) -> list[str]:
    """Schema-check a scenario file; returns a list of problems (empty = OK)."""
    try:
        load_scenario(path)
    except ScenarioError as exc:
        return [str(exc)]
    return []
