"""Tripod placement and two-stage instrument leveling.

Geometry of the setup sequence: dropping a tripod on terrain, rating the
placement (centroid misalignment, contact-plane normal, height spread),
rough leveling through leg lengths, and precise leveling through the three
tribrach screws (left, right, back) until the circular bubble centers.

Tilt bookkeeping uses two components per axis: the base tilt caused by the
terrain under the legs, and the screw-driven correction. The combined tilt
maps to the instrument axis with a second-order cross-coupling factor, to
a bubble offset, and back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateTriangle,
    InvertedNormal,
    OutOfRange,
    SmallAngleViolation,
)
from .geodesy import Terrain, WorldPoint

LEG_MIN = 0.6
LEG_MAX = 1.8

# Bubble calibration: circle radius in level-circle units, gain from axis
# tilt to bubble displacement, and the centering tolerance as a fraction
# of the radius.
BUBBLE_RADIUS = 10.0
BUBBLE_GAIN = 100.0
LEVEL_TOLERANCE = 0.02

# Tribrach screws: mechanical travel range and angular change per
# millimeter of travel.
SCREW_RANGE_MM = 10.0
SCREW_ALPHA = 0.015


@dataclass(frozen=True)
class TripodConfig:
    """Operator-adjustable tripod: position, heading, and three leg lengths."""

    center: tuple[float, float]
    heading: float
    leg_lengths: tuple[float, float, float]
    leg_splay_radius: float = 0.5

    def __post_init__(self):
        if len(self.leg_lengths) != 3:
            raise ValueError("a tripod has exactly three legs")
        for length in self.leg_lengths:
            if not (LEG_MIN <= length <= LEG_MAX):
                raise ValueError(
                    f"leg length {length} outside [{LEG_MIN}, {LEG_MAX}] m"
                )
        if not (self.leg_splay_radius > 0):
            raise ValueError("leg splay radius must be > 0")
        for length in self.leg_lengths:
            if length <= self.leg_splay_radius:
                raise ValueError(
                    f"leg length {length} must exceed the splay radius "
                    f"{self.leg_splay_radius}"
                )


@dataclass(frozen=True)
class ContactSet:
    """Tripod foot tips (rigid model) paired with their terrain contacts."""

    object_points: tuple[WorldPoint, WorldPoint, WorldPoint]
    ground_points: tuple[WorldPoint, WorldPoint, WorldPoint]

    def __post_init__(self):
        if len(self.object_points) != 3 or len(self.ground_points) != 3:
            raise ValueError("a ContactSet holds exactly 3 + 3 points")


@dataclass(frozen=True)
class TiltState:
    """Tilt split into terrain-induced base tilt and screw corrections."""

    u_base: float = 0.0
    v_base: float = 0.0
    u_adj: float = 0.0
    v_adj: float = 0.0

    @property
    def u(self) -> float:
        return self.u_base + self.u_adj

    @property
    def v(self) -> float:
        return self.v_base + self.v_adj


@dataclass(frozen=True)
class BubbleState:
    """Bubble offset (dx, dy) within a circular level of radius r."""

    dx: float
    dy: float
    r: float

    def __post_init__(self):
        if not (self.r > 0):
            raise ValueError("level-circle radius must be > 0")


@dataclass(frozen=True)
class ScrewState:
    """Travel of the left/right/back tribrach screws, in millimeters."""

    l: float = 0.0
    r: float = 0.0
    b: float = 0.0
    alpha_screw: float = SCREW_ALPHA

    def __post_init__(self):
        for name, travel in (("l", self.l), ("r", self.r), ("b", self.b)):
            if abs(travel) > SCREW_RANGE_MM:
                raise OutOfRange(
                    f"screw {name} travel {travel} mm exceeds "
                    f"±{SCREW_RANGE_MM} mm"
                )
        if not (self.alpha_screw > 0):
            raise ValueError("alpha_screw must be > 0")


# ---------------------------------------------------------------------------
# Placement geometry
# ---------------------------------------------------------------------------

def foot_positions(config: TripodConfig) -> list[tuple[float, float]]:
    """Foot (x, y) at 120° spacing around the center, rotated by heading."""
    cx, cy = config.center
    out = []
    for i in range(3):
        phi = config.heading + 2.0 * math.pi * i / 3.0
        out.append(
            (
                cx + config.leg_splay_radius * math.cos(phi),
                cy + config.leg_splay_radius * math.sin(phi),
            )
        )
    return out


def leg_drops(config: TripodConfig) -> list[float]:
    """Vertical drop of each leg from head anchor to foot at the splay radius."""
    r2 = config.leg_splay_radius ** 2
    return [math.sqrt(length * length - r2) for length in config.leg_lengths]


def drop_tripod(config: TripodConfig, terrain: Terrain) -> ContactSet:
    """Place the tripod on the terrain and return foot tips vs. ground contacts.

    The rigid tripod settles vertically until its first foot touches; the
    other feet may float above their contact points. Object points are the
    settled foot tips, ground points the terrain directly beneath them.
    """
    feet = foot_positions(config)
    drops = leg_drops(config)
    ground = [
        WorldPoint(x, y, terrain.elevation_at(x, y)) for x, y in feet
    ]
    seat = max(g.z + d for g, d in zip(ground, drops))
    objects = [
        WorldPoint(x, y, seat - d) for (x, y), d in zip(feet, drops)
    ]
    return ContactSet(object_points=tuple(objects), ground_points=tuple(ground))


def support_points(config: TripodConfig, terrain: Terrain) -> list[WorldPoint]:
    """Head-anchor positions implied by each leg resting on its contact."""
    feet = foot_positions(config)
    drops = leg_drops(config)
    return [
        WorldPoint(x, y, terrain.elevation_at(x, y) + d)
        for (x, y), d in zip(feet, drops)
    ]


def seat_height(config: TripodConfig, terrain: Terrain) -> float:
    """Elevation of the settled head plate (highest demanded anchor)."""
    return max(p.z for p in support_points(config, terrain))


def base_tilt(config: TripodConfig, terrain: Terrain) -> tuple[float, float]:
    """Base-plate tilt (u', v') induced by terrain and leg lengths."""
    pts = support_points(config, terrain)
    return base_tilt_from_normal(plane_normal(*pts))


# ---------------------------------------------------------------------------
# Placement metrics
# ---------------------------------------------------------------------------

def centroid(points) -> WorldPoint:
    """Component-wise mean of three points."""
    arr = np.stack([p.as_array() for p in points])
    if arr.shape[0] != 3:
        raise ValueError("centroid is defined over exactly three points")
    mean = arr.mean(axis=0)
    return WorldPoint(float(mean[0]), float(mean[1]), float(mean[2]))


def misalignment_distance(contacts: ContactSet) -> float:
    """Distance between the object and ground centroids; 0 when centered."""
    a = centroid(contacts.object_points).as_array()
    b = centroid(contacts.ground_points).as_array()
    return float(np.linalg.norm(a - b))


def plane_normal(a: WorldPoint, b: WorldPoint, c: WorldPoint) -> np.ndarray:
    """Cross-product normal (B - A) x (C - A); near-zero magnitude is an error."""
    n = np.cross(b.as_array() - a.as_array(), c.as_array() - a.as_array())
    if float(np.linalg.norm(n)) < 1e-9:
        raise DegenerateTriangle("contact points are (nearly) collinear")
    return n


def height_stddev(points) -> float:
    """Population standard deviation of the z components (divisor n)."""
    zs = np.array([p.z for p in points], dtype=np.float64)
    return float(np.sqrt(np.mean((zs - zs.mean()) ** 2)))


def base_tilt_from_normal(normal) -> tuple[float, float]:
    """Map an upward plane normal to base tilt angles (u', v')."""
    n = np.asarray(normal, dtype=np.float64)
    if n[2] <= 0:
        raise InvertedNormal(f"plane normal must point upward, got {n}")
    return math.atan2(n[0], n[2]), math.atan2(n[1], n[2])


# ---------------------------------------------------------------------------
# Leveling kinematics
# ---------------------------------------------------------------------------

def instrument_axis(tilt: TiltState) -> tuple[float, float]:
    """Instrument-axis misalignment (X, Z) from the combined tilt.

    The square-root factors couple the two axes so a tilt on one axis
    shrinks the effective misalignment on the other; valid only in the
    small-angle regime |u|, |v| < pi/4.
    """
    u = tilt.u
    v = tilt.v
    if abs(u) >= math.pi / 4 or abs(v) >= math.pi / 4:
        raise SmallAngleViolation(
            f"combined tilt ({u}, {v}) outside the small-angle regime"
        )
    x = u * math.sqrt(1.0 - v * v / 2.0)
    z = v * math.sqrt(1.0 - u * u / 2.0)
    return x, z


def bubble_from_axis(
    x: float,
    z: float,
    r: float = BUBBLE_RADIUS,
    gain: float = BUBBLE_GAIN,
) -> BubbleState:
    """Render axis misalignment as a bubble offset, clamped to the circle."""
    if not (r > 0 and gain > 0):
        raise ValueError("bubble radius and gain must be > 0")
    dx = gain * x
    dy = gain * z
    norm = math.hypot(dx, dy)
    if norm > r:
        dx *= r / norm
        dy *= r / norm
    return BubbleState(dx=dx, dy=dy, r=r)


def bubble_angles(bubble: BubbleState) -> tuple[float, float]:
    """Angular deviation encoded by the bubble offset."""
    return (
        math.atan(bubble.dx / bubble.r),
        math.atan(bubble.dy / bubble.r),
    )


def is_level(bubble: BubbleState, tol_fraction: float = LEVEL_TOLERANCE) -> bool:
    """True iff the bubble sits within tol_fraction of the circle radius."""
    if not (0.0 < tol_fraction < 1.0):
        raise ValueError(f"tol_fraction must be in (0, 1), got {tol_fraction}")
    return math.hypot(bubble.dx, bubble.dy) <= tol_fraction * bubble.r


def screw_correction(screws: ScrewState) -> tuple[float, float]:
    """Fine corrections (u'', v'') produced by the current screw travel."""
    a = screws.alpha_screw
    u_adj = a * (screws.l / 2.0 - screws.r / 2.0)
    v_adj = a * (screws.b - (screws.l / 2.0 + screws.r / 2.0))
    return u_adj, v_adj


def screw_increment(
    delta_l: float,
    delta_r: float,
    delta_b: float,
    alpha_screw: float = SCREW_ALPHA,
) -> tuple[float, float]:
    """Correction increment caused by screw travel deltas."""
    du = alpha_screw * (delta_l - delta_r) / 2.0
    dv = alpha_screw * (delta_b - (delta_l + delta_r) / 2.0)
    return du, dv


def solve_screws(
    u_target: float,
    v_target: float,
    alpha_screw: float = SCREW_ALPHA,
) -> ScrewState:
    """Minimal-norm screw travel producing the requested (u'', v'').

    Three screws drive two angles, leaving a one-parameter null space
    (advancing all screws together); it is resolved by l + r + b = 0,
    which is exactly the minimal-norm solution. Raises OutOfRange when the
    targets need more travel than the screws allow.
    """
    big_u = u_target / alpha_screw
    big_v = v_target / alpha_screw
    l = big_u - big_v / 3.0
    r = -big_u - big_v / 3.0
    b = 2.0 * big_v / 3.0
    for name, travel in (("l", l), ("r", r), ("b", b)):
        if abs(travel) > SCREW_RANGE_MM:
            raise OutOfRange(
                f"targets ({u_target}, {v_target}) need screw {name} at "
                f"{travel:.3f} mm, beyond ±{SCREW_RANGE_MM} mm"
            )
    return ScrewState(l=l, r=r, b=b, alpha_screw=alpha_screw)
