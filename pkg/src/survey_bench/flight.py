"""Quadrotor kinematics, waypoint paths, and trailing metrics.

The flight model is kinematic with a first-order attitude lag: commanded
pitch/roll pull the attitude toward a bounded tilt, tilt converts to
horizontal acceleration through the thrust-tilt relation, throttle drives
vertical acceleration against gravity, and linear drag opposes velocity.
Integration is semi-implicit Euler at a fixed tick, which makes every
trajectory a pure function of (initial state, input sequence).

Two exercise paths ship with the engine: a straight line for basic heading
control and a quarter-circle arc that forces continuous corrections.
Progress along a path counts waypoints captured strictly in order; the
score is the mean distance to the path centerline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import arc_distance, drone_step, polyline_distance
from .errors import EmptyRun
from .geodesy import Terrain, WorldPoint

G = 9.80665

PATH1 = "path1"
PATH2 = "path2"

STRAIGHT_LENGTH = 100.0
STRAIGHT_WAYPOINTS = 5
ARC_RADIUS = 60.0
ARC_SPAN = math.pi / 2.0
ARC_WAYPOINTS = 8
DEFAULT_CAPTURE_RADIUS = 2.0
DEFAULT_ALTITUDE = 30.0


@dataclass(frozen=True)
class FlightParams:
    """Physics constants; scenario-overridable, fixed for a session."""

    dt: float = 0.02
    max_tilt: float = math.radians(30.0)
    tau_att: float = 0.15
    a_max: float = 2.0 * G
    max_yaw_rate: float = math.pi / 2.0
    drag: float = 0.3
    g: float = G
    hover_rpm: float = 3000.0
    battery_drain_per_rpm_s: float = 2.0e-7

    def hover_throttle(self) -> float:
        return self.g / self.a_max


@dataclass(frozen=True)
class ControlInput:
    """Normalized stick commands, each in [-1, 1]."""

    throttle: float = 0.0
    pitch_cmd: float = 0.0
    roll_cmd: float = 0.0
    yaw_rate_cmd: float = 0.0

    def __post_init__(self):
        for name, v in (
            ("throttle", self.throttle),
            ("pitch_cmd", self.pitch_cmd),
            ("roll_cmd", self.roll_cmd),
            ("yaw_rate_cmd", self.yaw_rate_cmd),
        ):
            if not (math.isfinite(v) and -1.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [-1, 1], got {v!r}")


@dataclass(frozen=True)
class DroneState:
    """Kinematic pose plus HUD quantities (rotor rpm, battery fraction)."""

    position: WorldPoint
    velocity: np.ndarray
    yaw: float = 0.0
    pitch: float = 0.0
    roll: float = 0.0
    rotor_rpm: float = 0.0
    battery: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "velocity", np.asarray(self.velocity, dtype=np.float64)
        )
        if not (0.0 <= self.battery <= 1.0):
            raise ValueError(f"battery must be in [0, 1], got {self.battery}")

    def to_vector(self) -> np.ndarray:
        return np.array(
            [
                self.position.x,
                self.position.y,
                self.position.z,
                self.velocity[0],
                self.velocity[1],
                self.velocity[2],
                self.yaw,
                self.pitch,
                self.roll,
                self.rotor_rpm,
                self.battery,
            ],
            dtype=np.float64,
        )

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "DroneState":
        return cls(
            position=WorldPoint(float(vec[0]), float(vec[1]), float(vec[2])),
            velocity=vec[3:6].copy(),
            yaw=float(vec[6]),
            pitch=float(vec[7]),
            roll=float(vec[8]),
            rotor_rpm=float(vec[9]),
            battery=float(vec[10]),
        )


@dataclass(frozen=True)
class ArcSpec:
    """Horizontal circular-arc centerline."""

    center_x: float
    center_y: float
    z: float
    radius: float
    start_angle: float
    span: float


@dataclass(frozen=True)
class WaypointPath:
    """Ordered waypoints plus the exact centerline they were sampled from."""

    id: str
    waypoints: tuple[WorldPoint, ...]
    capture_radius: float = DEFAULT_CAPTURE_RADIUS
    arc: ArcSpec | None = None

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least two waypoints")
        if not (self.capture_radius > 0):
            raise ValueError("capture_radius must be > 0")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if (a.x, a.y, a.z) == (b.x, b.y, b.z):
                raise ValueError("consecutive waypoints must be distinct")


@dataclass
class TrailRun:
    """Progress record of one flight along a path."""

    path_id: str
    samples: list[tuple[float, float]] = field(default_factory=list)
    waypoints_hit: int = 0
    completed: bool = False


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

def step_dynamics(
    state: DroneState,
    control: ControlInput,
    params: FlightParams,
    terrain: Terrain,
) -> tuple[DroneState, bool]:
    """Advance one fixed tick; returns (new state, ground-contact flag).

    Ground contact clamps the drone onto the terrain with zero velocity;
    it is an event for the session log, not an error.
    """
    vec = state.to_vector()
    collided = drone_step(
        vec,
        control.throttle,
        control.pitch_cmd,
        control.roll_cmd,
        control.yaw_rate_cmd,
        params.dt,
        params.max_tilt,
        params.tau_att,
        params.a_max,
        params.max_yaw_rate,
        params.drag,
        params.g,
        params.hover_rpm,
        params.battery_drain_per_rpm_s,
        terrain.heights,
        terrain.origin[0],
        terrain.origin[1],
        terrain.cell_size,
    )
    return DroneState.from_vector(vec), bool(collided)


def hover_state(
    position: WorldPoint, params: FlightParams, yaw: float = 0.0
) -> DroneState:
    """Drone at rest at a position, rotors at hover rpm."""
    return DroneState(
        position=position,
        velocity=np.zeros(3),
        yaw=yaw,
        rotor_rpm=params.hover_rpm * (1.0 + params.hover_throttle()),
        battery=1.0,
    )


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

def make_path(
    path_id: str,
    origin: WorldPoint,
    capture_radius: float = DEFAULT_CAPTURE_RADIUS,
) -> WaypointPath:
    """Build one of the two exercise paths starting at ``origin``.

    path1: five equally spaced waypoints on a 100 m straight segment.
    path2: eight waypoints on a 90° circular arc of radius 60 m, curving
    left from the same starting point and heading.
    """
    if path_id == PATH1:
        step = STRAIGHT_LENGTH / (STRAIGHT_WAYPOINTS - 1)
        wps = tuple(
            WorldPoint(origin.x + i * step, origin.y, origin.z)
            for i in range(STRAIGHT_WAYPOINTS)
        )
        return WaypointPath(id=path_id, waypoints=wps, capture_radius=capture_radius)
    if path_id == PATH2:
        arc = ArcSpec(
            center_x=origin.x,
            center_y=origin.y + ARC_RADIUS,
            z=origin.z,
            radius=ARC_RADIUS,
            start_angle=-math.pi / 2.0,
            span=ARC_SPAN,
        )
        wps = tuple(
            WorldPoint(
                arc.center_x
                + ARC_RADIUS
                * math.cos(arc.start_angle + ARC_SPAN * i / (ARC_WAYPOINTS - 1)),
                arc.center_y
                + ARC_RADIUS
                * math.sin(arc.start_angle + ARC_SPAN * i / (ARC_WAYPOINTS - 1)),
                origin.z,
            )
            for i in range(ARC_WAYPOINTS)
        )
        return WaypointPath(
            id=path_id, waypoints=wps, capture_radius=capture_radius, arc=arc
        )
    raise ValueError(f"unknown path id {path_id!r}")


def cross_track_error(position: WorldPoint, path: WaypointPath) -> float:
    """Minimum 3-D distance from a position to the path centerline."""
    if path.arc is not None:
        return float(
            arc_distance(
                position.x,
                position.y,
                position.z,
                path.arc.center_x,
                path.arc.center_y,
                path.arc.z,
                path.arc.radius,
                path.arc.start_angle,
                path.arc.span,
            )
        )
    pts = np.array([[p.x, p.y, p.z] for p in path.waypoints])
    return float(polyline_distance(position.x, position.y, position.z, pts))


def update_progress(
    run: TrailRun, state: DroneState, path: WaypointPath, t: float
) -> TrailRun:
    """Record one tick: sample the cross-track error, capture in-order waypoints.

    Only the next expected waypoint can be captured; flying near a later
    waypoint changes nothing until its predecessors are done.
    """
    if run.completed:
        raise ValueError("run is already completed")
    run.samples.append((t, cross_track_error(state.position, path)))
    pos = state.position.as_array()
    while run.waypoints_hit < len(path.waypoints):
        wp = path.waypoints[run.waypoints_hit]
        if float(np.linalg.norm(pos - wp.as_array())) <= path.capture_radius:
            run.waypoints_hit += 1
        else:
            break
    if run.waypoints_hit == len(path.waypoints):
        run.completed = True
    return run


def trailing_accuracy(run: TrailRun) -> float:
    """Mean cross-track error over the run's samples."""
    if not run.samples:
        raise EmptyRun("trailing accuracy needs at least one sample")
    return float(np.mean([cte for _, cte in run.samples]))


# ---------------------------------------------------------------------------
# Scripted pursuit pilot
# ---------------------------------------------------------------------------

# Gains for the deterministic chase controller used by fixtures and tests.
PURSUIT_SPEED = 8.0
PURSUIT_KP = 0.6
PURSUIT_KV = 1.4
PURSUIT_KZ = 1.0
PURSUIT_KVZ = 2.0


def pure_pursuit_input(
    state: DroneState,
    path: WaypointPath,
    waypoints_hit: int,
    params: FlightParams,
) -> ControlInput:
    """Deterministic controller chasing the next uncaptured waypoint.

    Commands a velocity toward the target, inverts the thrust-tilt relation
    for pitch/roll, and holds the path altitude with the throttle. Yaw is
    left fixed; steering happens in the tilt plane.
    """
    target = path.waypoints[min(waypoints_hit, len(path.waypoints) - 1)]
    dx = target.x - state.position.x
    dy = target.y - state.position.y
    dist = math.hypot(dx, dy)
    if dist > 1e-9:
        speed = min(PURSUIT_SPEED, PURSUIT_KP * dist + 1.0)
        vdx = dx / dist * speed
        vdy = dy / dist * speed
    else:
        vdx = vdy = 0.0
    adx = PURSUIT_KV * (vdx - state.velocity[0]) + params.drag * state.velocity[0]
    ady = PURSUIT_KV * (vdy - state.velocity[1]) + params.drag * state.velocity[1]

    fwd_x = math.cos(state.yaw)
    fwd_y = math.sin(state.yaw)
    a_fwd = adx * fwd_x + ady * fwd_y
    a_right = adx * fwd_y - ady * fwd_x
    pitch_cmd = _clamp(math.atan2(a_fwd, params.g) / params.max_tilt)
    roll_cmd = _clamp(math.atan2(a_right, params.g) / params.max_tilt)

    az_des = PURSUIT_KZ * (target.z - state.position.z) - PURSUIT_KVZ * state.velocity[2]
    throttle = _clamp(
        (az_des + params.g + params.drag * state.velocity[2]) / params.a_max
    )
    return ControlInput(
        throttle=throttle,
        pitch_cmd=pitch_cmd,
        roll_cmd=roll_cmd,
        yaw_rate_cmd=0.0,
    )


def _clamp(v: float) -> float:
    return -1.0 if v < -1.0 else (1.0 if v > 1.0 else v)
