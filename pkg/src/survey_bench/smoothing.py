"""Controller input stabilization: exponential smoothing plus a velocity deadzone.

Raw tracked-input streams carry high-frequency jitter. A single recursive
exponential filter (factor ``alpha``) smooths position and velocity per
axis; a norm-based deadzone then zeroes residual micro-movements so only
deliberate motion reaches the instruments. ``ses_closed_form`` evaluates
the same filter non-recursively from geometric weights and serves as the
independent oracle for the recursive path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import ses_scan
from .errors import EmptyHistory, NonMonotoneTime

# Smoothing factor tuned for typical hand tremor; deadzone roughly 1% of
# typical hand speed. Both are scenario-configurable.
DEFAULT_ALPHA = 0.2
DEFAULT_DEADZONE = 0.01


@dataclass(frozen=True)
class RawSample:
    """One raw input sample: monotone timestamp, position and velocity."""

    t: float
    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "position", np.asarray(self.position, dtype=np.float64)
        )
        object.__setattr__(
            self, "velocity", np.asarray(self.velocity, dtype=np.float64)
        )


@dataclass(frozen=True)
class FilterState:
    """Value-type filter state; one stream per instance, single writer."""

    alpha: float
    last_smoothed_position: np.ndarray | None = None
    last_smoothed_velocity: np.ndarray | None = None
    last_t: float | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

    @property
    def initialized(self) -> bool:
        return self.last_smoothed_position is not None


def ses_step(
    state: FilterState, sample: RawSample
) -> tuple[FilterState, np.ndarray, np.ndarray]:
    """Blend one raw sample into the filter; returns (state, position, velocity).

    The first sample of a stream seeds the filter (smoothed := raw), which
    avoids a startup transient. Raises NonMonotoneTime if the sample's
    timestamp does not strictly increase.
    """
    if state.initialized and sample.t <= state.last_t:
        raise NonMonotoneTime(
            f"sample at t={sample.t} after t={state.last_t}"
        )
    a = state.alpha
    if state.initialized:
        pos = a * sample.position + (1.0 - a) * state.last_smoothed_position
        vel = a * sample.velocity + (1.0 - a) * state.last_smoothed_velocity
    else:
        pos = sample.position.copy()
        vel = sample.velocity.copy()
    new_state = FilterState(
        alpha=a,
        last_smoothed_position=pos,
        last_smoothed_velocity=vel,
        last_t=sample.t,
    )
    return new_state, pos, vel


def smooth_stream(
    state: FilterState, samples: list[RawSample]
) -> tuple[FilterState, np.ndarray, np.ndarray]:
    """Bulk equivalent of iterating ses_step; returns (state, positions, velocities).

    Runs the hot scan kernel over the whole stream at once. Output row i is
    the smoothed value after blending sample i.
    """
    if not samples:
        return state, np.empty((0, 3)), np.empty((0, 3))
    ts = np.array([s.t for s in samples])
    if state.initialized and ts[0] <= state.last_t:
        raise NonMonotoneTime(f"sample at t={ts[0]} after t={state.last_t}")
    if np.any(np.diff(ts) <= 0.0):
        raise NonMonotoneTime("sample timestamps must strictly increase")
    positions = np.stack([s.position for s in samples])
    velocities = np.stack([s.velocity for s in samples])
    if state.initialized:
        pos_sm = ses_scan(positions, state.alpha, state.last_smoothed_position)
        vel_sm = ses_scan(velocities, state.alpha, state.last_smoothed_velocity)
    else:
        # first sample seeds the filter verbatim, exactly like ses_step
        pos_sm = np.vstack(
            [positions[:1], ses_scan(positions[1:], state.alpha, positions[0])]
        )
        vel_sm = np.vstack(
            [velocities[:1], ses_scan(velocities[1:], state.alpha, velocities[0])]
        )
    new_state = FilterState(
        alpha=state.alpha,
        last_smoothed_position=pos_sm[-1].copy(),
        last_smoothed_velocity=vel_sm[-1].copy(),
        last_t=float(ts[-1]),
    )
    return new_state, pos_sm, vel_sm


def ses_closed_form(history, initial, alpha: float):
    """Non-recursive smoothing: explicit geometric-weight summation.

    ``history`` is the ordered list of raw values (scalars or vectors)
    blended since the filter held ``initial``. Independent oracle for
    ses_step: no recursion, the weights are evaluated directly.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    n = len(history)
    if n == 0:
        raise EmptyHistory("closed-form smoothing needs at least one sample")
    values = np.asarray(history, dtype=np.float64)
    # Newest sample carries weight alpha*(1-alpha)^0, oldest
    # alpha*(1-alpha)^(n-1); the seed keeps (1-alpha)^n.
    exponents = np.arange(n - 1, -1, -1, dtype=np.float64)
    weights = alpha * (1.0 - alpha) ** exponents
    weighted = np.tensordot(weights, values, axes=(0, 0))
    return weighted + (1.0 - alpha) ** n * np.asarray(initial, dtype=np.float64)


def apply_deadzone(velocity, threshold: float) -> np.ndarray:
    """Zero the velocity vector when its norm falls below the threshold.

    The comparison is norm-wise, not per-axis: zeroing individual axes
    would distort the motion direction. Above threshold the vector passes
    through unchanged (no rescaling).
    """
    if threshold < 0:
        raise ValueError(f"deadzone threshold must be >= 0, got {threshold}")
    velocity = np.asarray(velocity, dtype=np.float64)
    if float(np.linalg.norm(velocity)) < threshold:
        return np.zeros_like(velocity)
    return velocity
