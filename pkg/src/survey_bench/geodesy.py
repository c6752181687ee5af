"""World model: terrain heightfield, world points, and benchmarks.

The terrain is a regular grid of elevations queried by bilinear
interpolation. Queries outside the grid footprint are hard errors, never
clamped or extrapolated: a silently clamped elevation would corrupt every
leveling computation built on top of it. Units are meters throughout;
angles are radians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import bilinear_height
from .errors import DegenerateSamples, OutOfBounds, ScenarioError

TERRAIN_FORMAT = 1


@dataclass(frozen=True)
class WorldPoint:
    """A point in world coordinates: x east, y north, z elevation (meters)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"WorldPoint coordinates must be finite, got {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


@dataclass(frozen=True)
class Benchmark:
    """A survey benchmark; if ``elevation_known``, position.z is authoritative."""

    id: str
    position: WorldPoint
    elevation_known: bool


class Terrain:
    """Regular-grid heightfield with bilinear elevation queries.

    Immutable after construction; safe to share read-only across threads.
    """

    def __init__(self, origin: tuple[float, float], cell_size: float, heights):
        heights = np.asarray(heights, dtype=np.float64)
        if heights.ndim != 2:
            raise ValueError("heights must be a 2-D row-major grid")
        if heights.shape[0] < 2 or heights.shape[1] < 2:
            raise ValueError("terrain grid needs at least 2 rows and 2 columns")
        if not np.isfinite(heights).all():
            raise ValueError("terrain heights must all be finite")
        if not (cell_size > 0):
            raise ValueError(f"cell_size must be > 0, got {cell_size}")
        self.origin = (float(origin[0]), float(origin[1]))
        self.cell_size = float(cell_size)
        self.heights = heights
        self.heights.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.heights.shape[0]

    @property
    def n_cols(self) -> int:
        return self.heights.shape[1]

    @property
    def x_max(self) -> float:
        return self.origin[0] + (self.n_cols - 1) * self.cell_size

    @property
    def y_max(self) -> float:
        return self.origin[1] + (self.n_rows - 1) * self.cell_size

    def contains(self, x: float, y: float) -> bool:
        return (
            self.origin[0] <= x <= self.x_max
            and self.origin[1] <= y <= self.y_max
        )

    def elevation_at(self, x: float, y: float) -> float:
        """Bilinear elevation at (x, y); exact at grid nodes.

        Raises OutOfBounds for queries outside the grid footprint.
        """
        if not (math.isfinite(x) and math.isfinite(y)):
            raise OutOfBounds(f"non-finite terrain query ({x}, {y})")
        if not self.contains(x, y):
            raise OutOfBounds(
                f"({x}, {y}) outside terrain footprint "
                f"[{self.origin[0]}, {self.x_max}] x [{self.origin[1]}, {self.y_max}]"
            )
        return float(
            bilinear_height(
                self.heights, self.origin[0], self.origin[1], self.cell_size, x, y
            )
        )

    def surface_plane_at(
        self, x: float, y: float, radius: float
    ) -> tuple[np.ndarray, float]:
        """Least-squares plane over a sampled disc; returns (unit normal, mean z).

        The normal always has a positive z component. Raises OutOfBounds if
        the probe disc leaves the footprint, DegenerateSamples if the fit
        has no unique solution.
        """
        if not (radius > 0):
            raise ValueError(f"probe radius must be > 0, got {radius}")
        if not (
            self.contains(x - radius, y - radius)
            and self.contains(x + radius, y + radius)
        ):
            raise OutOfBounds(
                f"probe disc at ({x}, {y}) radius {radius} leaves the footprint"
            )

        step = radius / 4.0
        offsets = []
        zs = []
        for i in range(-4, 5):
            for j in range(-4, 5):
                dx = i * step
                dy = j * step
                if dx * dx + dy * dy <= radius * radius:
                    offsets.append((dx, dy))
                    zs.append(self.elevation_at(x + dx, y + dy))
        design = np.array([[1.0, dx, dy] for dx, dy in offsets])
        z = np.array(zs)
        coef, _, rank, _ = np.linalg.lstsq(design, z, rcond=None)
        if rank < 3:
            raise DegenerateSamples("plane-fit samples are rank deficient")
        normal = np.array([-coef[1], -coef[2], 1.0])
        normal /= np.linalg.norm(normal)
        return normal, float(z.mean())

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": TERRAIN_FORMAT,
            "origin": [self.origin[0], self.origin[1]],
            "cell_size": self.cell_size,
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "heights": [float(h) for h in self.heights.ravel()],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Terrain":
        try:
            if doc["format"] != TERRAIN_FORMAT:
                raise ScenarioError(f"unsupported terrain format {doc['format']!r}")
            n_rows = int(doc["n_rows"])
            n_cols = int(doc["n_cols"])
            heights = np.asarray(doc["heights"], dtype=np.float64)
            if heights.size != n_rows * n_cols:
                raise ScenarioError(
                    f"terrain height list has {heights.size} entries, "
                    f"expected {n_rows * n_cols}"
                )
            return cls(
                origin=(doc["origin"][0], doc["origin"][1]),
                cell_size=doc["cell_size"],
                heights=heights.reshape(n_rows, n_cols),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed terrain document: {exc}") from exc


def load_terrain_file(path: str | Path) -> Terrain:
    with open(path, "r", encoding="utf-8") as fh:
        return Terrain.from_dict(json.load(fh))


def save_terrain_file(terrain: Terrain, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(terrain.to_dict(), fh)
        fh.write("\n")
