"""Deterministic surveying-education simulation engine.

Headless measurement core for ground and aerial surveying exercises:
terrain heightfields, tripod setup and two-stage instrument leveling,
differential leveling with rod readings, input smoothing, quadrotor
waypoint trailing, and a session service with replayable traces and a
grading pipeline.
"""

__version__ = "1.0.0"

ENGINE_VERSION = __version__
PROTO_VERSION = 1

# Fixed simulation tick: 50 Hz. Live mode converts wall time to ticks at
# the boundary; the engine itself never reads a clock.
TICK_DT = 0.02
TICK_RATE = 50
