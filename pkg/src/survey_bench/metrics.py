"""Session-trace metrics: accuracy, completion time, interaction efficiency.

Everything here is a pure fold over an immutable event list. A task
attempt is the window between a ``task_start`` and its matching
``task_end`` milestone; events outside a window never influence that
window's metrics.

What counts as one interaction (graders can recalibrate offline from the
raw event counts carried in every report):
  * one screw-turn command,
  * one slider commit (leg length or tripod heading),
  * one joystick correction, defined as a sign reversal of a command axis
    beyond a 0.2 deadband (below that, stick noise would inflate counts).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import MissingMilestone
from .leveling import elevation_error  # noqa: F401  (re-exported metric)

EVENT_INPUT = "input"
EVENT_ENGINE = "engine"
EVENT_MILESTONE = "milestone"

TASK_START = "task_start"
TASK_END = "task_end"

MILESTONE_NAMES = frozenset(
    {
        TASK_START,
        TASK_END,
        "reading_taken",
        "waypoint_hit",
        "level_achieved",
        "collision",
        "exercise_graded",
        "session_end",
    }
)

# Discrete input verbs that count as one interaction each.
COUNTED_VERBS = frozenset({"turn_screw", "set_leg_length", "rotate_tripod"})

# Input verbs excluded from the raw gesture tally (clock and queries).
UNCOUNTED_RAW_VERBS = frozenset({"tick", "get_state"})

JOYSTICK_AXES = ("throttle", "pitch", "roll", "yaw_rate")
REVERSAL_DEADBAND = 0.2

REPORT_SCHEMA = 1


@dataclass(frozen=True)
class TraceEvent:
    """One timestamped trace entry: an input, engine event, or milestone."""

    t: float
    kind: str
    name: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (EVENT_INPUT, EVENT_ENGINE, EVENT_MILESTONE):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind == EVENT_MILESTONE and self.name not in MILESTONE_NAMES:
            raise ValueError(f"unknown milestone {self.name!r}")

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "kind": self.kind,
            "name": self.name,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TraceEvent":
        return cls(
            t=doc["t"], kind=doc["kind"], name=doc["name"], payload=doc["payload"]
        )


@dataclass(frozen=True)
class MetricsReport:
    """Per-attempt metrics row; optional metrics are None when inapplicable."""

    scenario_id: str
    task: str
    attempt: int
    completion_time: float
    interaction_count: int
    raw_input_events: int
    elevation_error: float | None = None
    trailing_accuracy: float | None = None

    def __post_init__(self):
        if self.completion_time < 0:
            raise ValueError("completion_time must be >= 0")
        if self.interaction_count < 0:
            raise ValueError("interaction_count must be >= 0")

    def to_dict(self) -> dict:
        # key order is the report wire format; keep it stable
        return {
            "task": self.task,
            "attempt": self.attempt,
            "completion_time_s": self.completion_time,
            "interaction_count": self.interaction_count,
            "raw_input_events": self.raw_input_events,
            "elevation_error": self.elevation_error,
            "trailing_accuracy_m": self.trailing_accuracy,
        }


class InteractionCounter:
    """Incremental interaction tally shared by live sessions and the fold."""

    def __init__(self, deadband: float = REVERSAL_DEADBAND):
        self.deadband = deadband
        self.count = 0
        self._last_sign = {axis: 0 for axis in JOYSTICK_AXES}

    def feed(self, name: str, payload: dict) -> None:
        if name in COUNTED_VERBS:
            self.count += 1
            return
        if name != "control":
            return
        for axis in JOYSTICK_AXES:
            v = payload.get(axis, 0.0)
            if not isinstance(v, (int, float)) or abs(v) <= self.deadband:
                continue
            sign = 1 if v > 0 else -1
            if self._last_sign[axis] != 0 and sign != self._last_sign[axis]:
                self.count += 1
            self._last_sign[axis] = sign


def _attempt_windows(events, task_name: str):
    """Yield (attempt_id, [events inside the window]) for a task, in order."""
    window = None
    current = None
    collected = []
    for ev in events:
        if ev.kind == EVENT_MILESTONE and ev.payload.get("task") == task_name:
            if ev.name == TASK_START:
                current = ev.payload.get("attempt", len(collected) + 1)
                window = []
                continue
            if ev.name == TASK_END and window is not None:
                collected.append((current, window))
                window = None
                current = None
                continue
        if window is not None:
            window.append(ev)
    return collected


def completion_time(events, task_name: str) -> list[float]:
    """Per-attempt task durations, in the order the attempts ran."""
    durations = []
    start_t = None
    for ev in events:
        if ev.kind != EVENT_MILESTONE or ev.payload.get("task") != task_name:
            continue
        if ev.name == TASK_START:
            start_t = ev.t
        elif ev.name == TASK_END and start_t is not None:
            durations.append(ev.t - start_t)
            start_t = None
    if not durations:
        raise MissingMilestone(f"no completed {task_name!r} window in trace")
    return durations


def interaction_count(events, task_name: str) -> list[int]:
    """Per-attempt counted interactions (see module docstring for the rules)."""
    windows = _attempt_windows(events, task_name)
    if not windows:
        raise MissingMilestone(f"no completed {task_name!r} window in trace")
    counts = []
    for _, window in windows:
        counter = InteractionCounter()
        for ev in window:
            if ev.kind == EVENT_INPUT:
                counter.feed(ev.name, ev.payload)
        counts.append(counter.count)
    return counts


def _aggregate(values: list[float]) -> dict | None:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return {
        "min": min(present),
        "max": max(present),
        "mean": sum(present) / len(present),
    }


def task_names(events) -> list[str]:
    """Distinct task names in first-start order."""
    seen = []
    for ev in events:
        if ev.kind == EVENT_MILESTONE and ev.name == TASK_START:
            task = ev.payload.get("task")
            if task is not None and task not in seen:
                seen.append(task)
    return seen


def emit_report(header: dict, events) -> dict:
    """Build the full metrics report document for a finished session.

    One entry per completed attempt across all tasks, then an aggregate
    (min/max/mean) per metric. Key order is fixed so rendered reports are
    byte-stable golden files.
    """
    scenario_id = header.get("scenario_id")
    rows: list[MetricsReport] = []
    for task in task_names(events):
        durations = dict(
            zip(
                (a for a, _ in _attempt_windows(events, task)),
                completion_time(events, task),
            )
        )
        for attempt_id, window in _attempt_windows(events, task):
            counter = InteractionCounter()
            raw = 0
            elev_err = None
            trail_acc = None
            for ev in window:
                if ev.kind == EVENT_INPUT:
                    counter.feed(ev.name, ev.payload)
                    if ev.name not in UNCOUNTED_RAW_VERBS:
                        raw += 1
                elif ev.kind == EVENT_ENGINE:
                    if ev.name == "leveling_result":
                        elev_err = ev.payload.get("error")
                    elif ev.name == "trail_summary":
                        trail_acc = ev.payload.get("trailing_accuracy_m")
            rows.append(
                MetricsReport(
                    scenario_id=scenario_id,
                    task=task,
                    attempt=attempt_id,
                    completion_time=durations[attempt_id],
                    interaction_count=counter.count,
                    raw_input_events=raw,
                    elevation_error=elev_err,
                    trailing_accuracy=trail_acc,
                )
            )
    attempts = [row.to_dict() for row in rows]
    report = {
        "schema": REPORT_SCHEMA,
        "engine_version": header.get("engine_version"),
        "scenario": scenario_id,
        "seed": header.get("seed"),
        "attempts": attempts,
        "aggregate": {
            "completion_time_s": _aggregate(
                [a["completion_time_s"] for a in attempts]
            ),
            "interaction_count": _aggregate(
                [a["interaction_count"] for a in attempts]
            ),
            "elevation_error": _aggregate([a["elevation_error"] for a in attempts]),
            "trailing_accuracy_m": _aggregate(
                [a["trailing_accuracy_m"] for a in attempts]
            ),
        },
    }
    return report


def render_report(report: dict) -> str:
    """Render a report deterministically (byte-stable across replays)."""
    return json.dumps(report, indent=2) + "\n"


def rows_for_csv(report: dict, trace_path: str = "") -> list[dict]:
    """Flatten a report into grading CSV rows."""
    rows = []
    for a in report["attempts"]:
        rows.append(
            {
                "scenario": report["scenario"],
                "trace": trace_path,
                "task": a["task"],
                "attempt": a["attempt"],
                "completion_time_s": a["completion_time_s"],
                "interaction_count": a["interaction_count"],
                "raw_input_events": a["raw_input_events"],
                "elevation_error": a["elevation_error"],
                "trailing_accuracy_m": a["trailing_accuracy_m"],
            }
        )
    return rows
