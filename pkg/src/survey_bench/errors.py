"""Engine error types.

Every exception the engine can raise at a module boundary lives here so
callers (and the session message loop, which converts them into error
replies) can catch one base class. Class names double as protocol error
codes via ``type(exc).__name__``.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine-level errors."""


# -- geodesy ----------------------------------------------------------------

class OutOfBounds(EngineError):
    """Query point or probe footprint lies outside the terrain grid."""


class DegenerateSamples(EngineError):
    """Plane-fit samples are collinear; no unique plane exists."""


# -- input filter -----------------------------------------------------------

class NonMonotoneTime(EngineError):
    """Sample timestamp does not strictly increase within its stream."""


class EmptyHistory(EngineError):
    """Closed-form smoothing evaluated over an empty sample history."""


# -- instrument setup -------------------------------------------------------

class DegenerateTriangle(EngineError):
    """Three points are collinear; the normal vector vanishes."""


class InvertedNormal(EngineError):
    """Plane normal does not point upward (z <= 0)."""


class SmallAngleViolation(EngineError):
    """Tilt component beyond the small-angle validity region (|angle| >= pi/4)."""


class OutOfRange(EngineError):
    """Requested screw travel exceeds the mechanical range."""


# -- leveling survey --------------------------------------------------------

class NotLevel(EngineError):
    """Rod reading requested while the instrument is not level."""


class RodOutOfRange(EngineError):
    """Geometric rod reading falls outside [0, rod_height_max]."""


class WrongTarget(EngineError):
    """Sight reading targets the wrong benchmark for its kind."""


class ZeroTrueElevation(EngineError):
    """Relative elevation error is undefined when the true elevation is 0."""


# -- flight -----------------------------------------------------------------

class EmptyRun(EngineError):
    """Trail metrics requested for a run with no samples."""


# -- metrics ----------------------------------------------------------------

class MissingMilestone(EngineError):
    """Trace lacks the task_start/task_end milestones for the requested task."""


# -- session / trace --------------------------------------------------------

class VersionMismatch(EngineError):
    """Trace was recorded by an incompatible engine major version."""


class ScenarioMismatch(EngineError):
    """Trace was recorded against a different scenario."""


class CorruptTrace(EngineError):
    """Trace file failed its integrity hash check."""


class ScenarioError(EngineError):
    """Scenario or terrain file is malformed."""
