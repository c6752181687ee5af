"""Session state machine: modes, message handling, traces, and replay.

A session is a single-threaded, tick-driven state machine. Every accepted
message is appended to the trace as an ``input`` event; everything the
engine decides (readings, gradings, waypoint hits) is appended as an
``engine`` event or ``milestone``. Replaying the input events of a trace
through a fresh session regenerates the engine events, the final state,
and the metrics report exactly - time is a tick counter and all randomness
comes from one seeded generator with a fixed draw order.

Modes and their legal verbs:
    orientation  tick, start_exercise, get_state, end_session
    leveling     tick, set_leg_length, rotate_tripod, turn_screw, sight,
                 record_reading, end_exercise, get_state, end_session
    flight       tick, control, end_exercise, get_state, end_session
    ended        get_state
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ENGINE_VERSION, PROTO_VERSION, TICK_DT, TICK_RATE
from . import flight as fl
from . import instrument as ins
from . import leveling as lv
from .errors import (
    CorruptTrace,
    EngineError,
    ScenarioMismatch,
    VersionMismatch,
)
from .metrics import (
    EVENT_ENGINE,
    EVENT_INPUT,
    EVENT_MILESTONE,
    InteractionCounter,
    TraceEvent,
    emit_report,
)
from .protocol import (
    ERR_ILLEGAL_IN_MODE,
    MessageError,
    ack_reply,
    error_reply,
    validate_message,
)
from .scenario import Scenario
from .smoothing import FilterState, RawSample, apply_deadzone, ses_step

MODE_ORIENTATION = "orientation"
MODE_LEVELING = "leveling"
MODE_FLIGHT = "flight"
MODE_ENDED = "ended"

_VERB_MODES = {
    "tick": {MODE_ORIENTATION, MODE_LEVELING, MODE_FLIGHT},
    "start_exercise": {MODE_ORIENTATION},
    "end_exercise": {MODE_LEVELING, MODE_FLIGHT},
    "set_leg_length": {MODE_LEVELING},
    "rotate_tripod": {MODE_LEVELING},
    "turn_screw": {MODE_LEVELING},
    "sight": {MODE_LEVELING},
    "record_reading": {MODE_LEVELING},
    "control": {MODE_FLIGHT},
    "get_state": {MODE_ORIENTATION, MODE_LEVELING, MODE_FLIGHT, MODE_ENDED},
    "end_session": {MODE_ORIENTATION, MODE_LEVELING, MODE_FLIGHT},
}


@dataclass
class SessionTrace:
    """Replayable event log: header plus ordered events."""

    header: dict
    events: list[TraceEvent] = field(default_factory=list)


class Session:
    """One live or replayed session over a resolved scenario."""

    def __init__(self, scenario: Scenario, seed_override: int | None = None):
        self.scenario = scenario
        self.seed = scenario.seed if seed_override is None else int(seed_override)
        self.rng = np.random.default_rng(self.seed)
        self.clock = 0
        self.mode = MODE_ORIENTATION
        self.trace = SessionTrace(
            header={
                "format": 1,
                "proto": PROTO_VERSION,
                "engine_version": ENGINE_VERSION,
                "scenario_id": scenario.id,
                "seed": self.seed,
                "tick_rate": TICK_RATE,
                "dt": TICK_DT,
                "scenario_doc": scenario.raw_doc,
            }
        )
        self._attempt_counter: dict[str, int] = {}
        self._task: str | None = None
        self._task_start_t = 0.0
        self._live_counter: InteractionCounter | None = None
        self._task_raw_inputs = 0

        # leveling state
        self._tripod: ins.TripodConfig | None = None
        self._screws = ins.ScrewState()
        self._tilt = ins.TiltState()
        self._contacts: ins.ContactSet | None = None
        self._seat: float | None = None
        self._was_level = False
        self._last_sight: tuple[str, float] | None = None
        self._readings: dict[str, lv.SightReading] = {}

        # flight state
        self._drone_vec: np.ndarray | None = None
        self._path: fl.WaypointPath | None = None
        self._run: fl.TrailRun | None = None
        self._raw_control = (0.0, 0.0, 0.0, 0.0)  # throttle, pitch, roll, yaw_rate
        self._last_raw_stick = np.zeros(3)
        self._effective_control = fl.ControlInput()
        self._stick_filter: FilterState | None = None
        self._throttle_sm = 0.0

    # -- time -----------------------------------------------------------------

    @property
    def t(self) -> float:
        return self.clock * TICK_DT

    # -- trace plumbing ---------------------------------------------------------

    def _log(self, kind: str, name: str, payload: dict | None = None) -> None:
        self.trace.events.append(
            TraceEvent(t=self.t, kind=kind, name=name, payload=payload or {})
        )

    def _log_input(self, verb: str, params: dict) -> None:
        payload = {k: v for k, v in params.items() if v is not None}
        self._log(EVENT_INPUT, verb, payload)
        if self._task is not None:
            if self._live_counter is not None:
                self._live_counter.feed(verb, payload)
            if verb not in ("tick", "get_state"):
                self._task_raw_inputs += 1

    # -- public API -------------------------------------------------------------

    def apply_message(self, message) -> list[dict]:
        """Validate and execute one message; never raises.

        Returns the outbound messages (reply first, then any events or
        telemetry). Rejected messages leave the session state untouched.
        """
        try:
            verb, params = validate_message(message)
        except MessageError as exc:
            return [error_reply(exc.code, exc.detail)]
        if self.mode not in _VERB_MODES[verb]:
            return [
                error_reply(
                    ERR_ILLEGAL_IN_MODE,
                    f"{verb!r} is not legal in {self.mode!r} mode",
                )
            ]
        handler = getattr(self, f"_handle_{verb}")
        try:
            return handler(params)
        except EngineError as exc:
            return [error_reply(type(exc).__name__, str(exc))]
        except ValueError as exc:
            return [error_reply("MalformedMessage", str(exc))]
        except Exception as exc:  # pragma: no cover - defensive service loop
            return [error_reply("InternalError", f"{type(exc).__name__}: {exc}")]

    def record(self) -> SessionTrace:
        """Snapshot the trace (header copy + event list copy)."""
        return SessionTrace(
            header=dict(self.trace.header), events=list(self.trace.events)
        )

    def state_hash(self) -> str:
        """Deterministic digest of the externally visible session state."""
        doc = {
            "mode": self.mode,
            "clock": self.clock,
            "tripod": None
            if self._tripod is None
            else [
                list(self._tripod.center),
                self._tripod.heading,
                list(self._tripod.leg_lengths),
                self._tripod.leg_splay_radius,
            ],
            "screws": [self._screws.l, self._screws.r, self._screws.b],
            "tilt": [
                self._tilt.u_base,
                self._tilt.v_base,
                self._tilt.u_adj,
                self._tilt.v_adj,
            ],
            "readings": {
                k: [v.value, v.target, v.taken_at]
                for k, v in sorted(self._readings.items())
            },
            "drone": None
            if self._drone_vec is None
            else [repr(float(x)) for x in self._drone_vec],
            "waypoints_hit": None if self._run is None else self._run.waypoints_hit,
            "completed": None if self._run is None else self._run.completed,
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def build_report(self) -> dict:
        return emit_report(self.trace.header, self.trace.events)

    # -- milestones ---------------------------------------------------------------

    def _start_task(self, task: str) -> int:
        attempt = self._attempt_counter.get(task, 0) + 1
        self._attempt_counter[task] = attempt
        self._task = task
        self._task_start_t = self.t
        self._live_counter = InteractionCounter()
        self._task_raw_inputs = 0
        self._log(EVENT_MILESTONE, "task_start", {"task": task, "attempt": attempt})
        return attempt

    def _end_task(self) -> None:
        task = self._task
        attempt = self._attempt_counter[task]
        self._log(EVENT_MILESTONE, "task_end", {"task": task, "attempt": attempt})
        self._task = None
        self._live_counter = None
        self.mode = MODE_ORIENTATION

    # -- leveling helpers -----------------------------------------------------------

    def _refresh_tripod(self, tripod: ins.TripodConfig) -> dict:
        """Re-drop the tripod and recompute placement + tilt state."""
        contacts = ins.drop_tripod(tripod, self.scenario.terrain)
        u_base, v_base = ins.base_tilt(tripod, self.scenario.terrain)
        seat = ins.seat_height(tripod, self.scenario.terrain)
        self._tripod = tripod
        self._contacts = contacts
        self._seat = seat
        self._tilt = ins.TiltState(
            u_base=u_base,
            v_base=v_base,
            u_adj=self._tilt.u_adj,
            v_adj=self._tilt.v_adj,
        )
        return self._leveling_telemetry()

    def _bubble(self) -> ins.BubbleState:
        x, z = ins.instrument_axis(self._tilt)
        return ins.bubble_from_axis(x, z)

    def _leveling_telemetry(self) -> dict:
        bubble = self._bubble()
        level = ins.is_level(bubble)
        if level and not self._was_level:
            self._log(EVENT_MILESTONE, "level_achieved", {"task": self._task})
        self._was_level = level
        return {
            "telemetry": "leveling",
            "t": self.t,
            "task_elapsed_s": self.t - self._task_start_t,
            "bubble": {"dx": bubble.dx, "dy": bubble.dy, "r": bubble.r},
            "is_level": level,
            "misalignment_m": ins.misalignment_distance(self._contacts),
            "height_stddev_m": ins.height_stddev(self._contacts.ground_points),
            "screws_mm": {
                "l": self._screws.l,
                "r": self._screws.r,
                "b": self._screws.b,
            },
            "legs_m": list(self._tripod.leg_lengths),
            "heading_rad": self._tripod.heading,
            "seat_elevation_m": self._seat,
            "interaction_count": self._live_counter.count
            if self._live_counter
            else 0,
        }

    def _instrument_hi(self) -> float:
        return self._seat + self.scenario.leveling.instrument_offset

    # -- flight helpers ---------------------------------------------------------------

    def _flight_telemetry(self) -> dict:
        vec = self._drone_vec
        return {
            "telemetry": "flight",
            "t": self.t,
            "task_elapsed_s": self.t - self._task_start_t,
            "position": [vec[0], vec[1], vec[2]],
            "velocity": [vec[3], vec[4], vec[5]],
            "yaw": vec[6],
            "pitch": vec[7],
            "roll": vec[8],
            "rpm": vec[9],
            "battery": vec[10],
            "cross_track_m": self._run.samples[-1][1] if self._run.samples else None,
            "waypoints_hit": self._run.waypoints_hit,
            "waypoint_total": len(self._path.waypoints),
            "completed": self._run.completed,
            "interaction_count": self._live_counter.count
            if self._live_counter
            else 0,
        }

    def _seed_stick_filter(self) -> None:
        """Seed the stick filter at neutral, one tick before the first sample."""
        seed = RawSample(
            t=self.t - TICK_DT, position=np.zeros(3), velocity=np.zeros(3)
        )
        self._stick_filter, _, _ = ses_step(
            FilterState(alpha=self.scenario.filter_alpha), seed
        )
        self._last_raw_stick = np.zeros(3)

    def _filter_controls(self) -> fl.ControlInput:
        """Sample-and-hold stick filtering, run once per tick.

        The raw stick vector (pitch, roll, yaw_rate) passes through the
        exponential filter; the deadzone acts on its smoothed rate of
        change, holding the effective sticks once the operator's hand is
        (nearly) still. Throttle smooths with the same factor.
        """
        throttle, pitch, roll, yaw_rate = self._raw_control
        alpha = self.scenario.filter_alpha
        raw = np.array([pitch, roll, yaw_rate])
        velocity = (raw - self._last_raw_stick) / TICK_DT
        self._throttle_sm = alpha * throttle + (1.0 - alpha) * self._throttle_sm
        sample = RawSample(t=self.t, position=raw, velocity=velocity)
        self._stick_filter, pos_sm, vel_sm = ses_step(self._stick_filter, sample)
        self._last_raw_stick = raw
        gated = apply_deadzone(vel_sm, self.scenario.filter_deadzone)
        if not np.any(gated):
            smoothed = np.array(
                [
                    self._effective_control.pitch_cmd,
                    self._effective_control.roll_cmd,
                    self._effective_control.yaw_rate_cmd,
                ]
            )
        else:
            smoothed = pos_sm
        control = fl.ControlInput(
            throttle=float(np.clip(self._throttle_sm, -1.0, 1.0)),
            pitch_cmd=float(np.clip(smoothed[0], -1.0, 1.0)),
            roll_cmd=float(np.clip(smoothed[1], -1.0, 1.0)),
            yaw_rate_cmd=float(np.clip(smoothed[2], -1.0, 1.0)),
        )
        self._effective_control = control
        return control

    def _tick_flight(self) -> dict:
        params = self.scenario.physics
        control = self._filter_controls()
        state = fl.DroneState.from_vector(self._drone_vec)
        new_state, collided = fl.step_dynamics(
            state, control, params, self.scenario.terrain
        )
        self._drone_vec = new_state.to_vector()
        self.clock += 1
        if collided:
            self._log(EVENT_MILESTONE, "collision", {"task": self._task})
        before = self._run.waypoints_hit
        fl.update_progress(self._run, new_state, self._path, self.t)
        for hit in range(before, self._run.waypoints_hit):
            self._log(
                EVENT_MILESTONE,
                "waypoint_hit",
                {"task": self._task, "index": hit},
            )
        telemetry = self._flight_telemetry()
        if self._run.completed:
            self._finish_flight()
        return telemetry

    def _finish_flight(self) -> None:
        accuracy = (
            fl.trailing_accuracy(self._run) if self._run.samples else None
        )
        self._log(
            EVENT_ENGINE,
            "trail_summary",
            {
                "path": self._path.id,
                "trailing_accuracy_m": accuracy,
                "waypoints_hit": self._run.waypoints_hit,
                "completed": self._run.completed,
                "samples": len(self._run.samples),
            },
        )
        self._end_task()

    # -- handlers -----------------------------------------------------------------

    def _handle_tick(self, params: dict) -> list[dict]:
        n = params["n"]
        self._log_input("tick", params)
        out: list[dict] = []
        for _ in range(n):
            if self.mode == MODE_FLIGHT:
                out.append(self._tick_flight())
            else:
                self.clock += 1
        reply = ack_reply("tick", t=self.t, mode=self.mode)
        return [reply] + out

    def _handle_start_exercise(self, params: dict) -> list[dict]:
        exercise = params["exercise"]
        if exercise == "leveling":
            spec = self.scenario.leveling
            if spec is None:
                return [
                    error_reply(
                        "IllegalInMode", "scenario has no leveling exercise"
                    )
                ]
            # validate placement before committing any state
            ins.drop_tripod(spec.tripod, self.scenario.terrain)
            self._log_input("start_exercise", params)
            self.mode = MODE_LEVELING
            self._start_task("leveling")
            self._screws = ins.ScrewState(alpha_screw=self._screws.alpha_screw)
            self._tilt = ins.TiltState()
            self._was_level = False
            self._last_sight = None
            self._readings = {}
            telemetry = self._refresh_tripod(spec.tripod)
            return [ack_reply("start_exercise", exercise="leveling"), telemetry]

        spec = self.scenario.flight
        if spec is None:
            return [error_reply("IllegalInMode", "scenario has no flight exercise")]
        path = fl.make_path(params["path"], spec.origin, spec.capture_radius)
        self._log_input("start_exercise", params)
        self.mode = MODE_FLIGHT
        self._start_task(path.id)
        self._path = path
        self._run = fl.TrailRun(path_id=path.id)
        self._drone_vec = fl.hover_state(
            path.waypoints[0], self.scenario.physics
        ).to_vector()
        self._raw_control = (
            self.scenario.physics.hover_throttle(),
            0.0,
            0.0,
            0.0,
        )
        self._effective_control = fl.ControlInput(
            throttle=self.scenario.physics.hover_throttle()
        )
        self._seed_stick_filter()
        self._throttle_sm = self._raw_control[0]
        return [
            ack_reply(
                "start_exercise",
                exercise="flight",
                path=path.id,
                waypoints=[[p.x, p.y, p.z] for p in path.waypoints],
                capture_radius=path.capture_radius,
            )
        ]

    def _handle_end_exercise(self, params: dict) -> list[dict]:
        self._log_input("end_exercise", params)
        if self.mode == MODE_FLIGHT:
            self._finish_flight()
        else:
            self._end_task()
        return [ack_reply("end_exercise", mode=self.mode)]

    def _handle_set_leg_length(self, params: dict) -> list[dict]:
        leg = params["leg"]
        length = params["length"]
        legs = list(self._tripod.leg_lengths)
        legs[leg] = length
        tripod = ins.TripodConfig(  # validates the new length
            center=self._tripod.center,
            heading=self._tripod.heading,
            leg_lengths=tuple(legs),
            leg_splay_radius=self._tripod.leg_splay_radius,
        )
        self._log_input("set_leg_length", params)
        telemetry = self._refresh_tripod(tripod)
        return [ack_reply("set_leg_length", leg=leg, length=length), telemetry]

    def _handle_rotate_tripod(self, params: dict) -> list[dict]:
        tripod = ins.TripodConfig(
            center=self._tripod.center,
            heading=params["heading"],
            leg_lengths=self._tripod.leg_lengths,
            leg_splay_radius=self._tripod.leg_splay_radius,
        )
        # validate terrain contact before committing
        ins.drop_tripod(tripod, self.scenario.terrain)
        self._log_input("rotate_tripod", params)
        telemetry = self._refresh_tripod(tripod)
        return [ack_reply("rotate_tripod", heading=params["heading"]), telemetry]

    def _handle_turn_screw(self, params: dict) -> list[dict]:
        name = params["screw"]
        clicks = params["clicks"]
        travel = clicks * self.scenario.screw_step_mm
        new = {
            "l": self._screws.l,
            "r": self._screws.r,
            "b": self._screws.b,
        }
        # mechanical stop: clamp at the travel limits
        new[name] = min(
            max(new[name] + travel, -ins.SCREW_RANGE_MM), ins.SCREW_RANGE_MM
        )
        self._log_input("turn_screw", params)
        self._screws = ins.ScrewState(
            l=new["l"], r=new["r"], b=new["b"], alpha_screw=self._screws.alpha_screw
        )
        u_adj, v_adj = ins.screw_correction(self._screws)
        self._tilt = ins.TiltState(
            u_base=self._tilt.u_base,
            v_base=self._tilt.v_base,
            u_adj=u_adj,
            v_adj=v_adj,
        )
        telemetry = self._leveling_telemetry()
        return [
            ack_reply("turn_screw", screw=name, travel_mm=new[name]),
            telemetry,
        ]

    def _handle_sight(self, params: dict) -> list[dict]:
        target = params["target"]
        spec = self.scenario.leveling
        benchmarks = {
            spec.exercise.benchmark_a.id: spec.exercise.benchmark_a,
            spec.exercise.benchmark_b.id: spec.exercise.benchmark_b,
        }
        if target not in benchmarks:
            return [
                error_reply("MalformedMessage", f"unknown benchmark {target!r}")
            ]
        bubble = self._bubble()
        value = lv.simulated_rod_reading(
            instrument_hi=self._instrument_hi(),
            rod_base_elevation=benchmarks[target].position.z,
            noise_sd=spec.noise_sd,
            rng=self.rng,
            rod_height_max=spec.exercise.rod_height_max,
            instrument_level=ins.is_level(bubble),
        )
        self._log_input("sight", params)
        self._last_sight = (target, value)
        self._log(
            EVENT_MILESTONE,
            "reading_taken",
            {"task": self._task, "target": target, "value": value},
        )
        return [ack_reply("sight", target=target, rod_value=value)]

    def _handle_record_reading(self, params: dict) -> list[dict]:
        if self._last_sight is None:
            return [
                error_reply(
                    "MalformedMessage",
                    "no sight taken; aim at a benchmark before recording",
                )
            ]
        kind = params["kind"]
        value = params["value"]
        spec = self.scenario.leveling
        if value > spec.exercise.rod_height_max:
            return [
                error_reply(
                    "RodOutOfRange",
                    f"recorded value {value} exceeds the "
                    f"{spec.exercise.rod_height_max} m rod",
                )
            ]
        target, _ = self._last_sight
        expected = (
            spec.exercise.benchmark_a.id
            if kind == lv.BACKSIGHT
            else spec.exercise.benchmark_b.id
        )
        if target != expected:
            return [
                error_reply(
                    "WrongTarget",
                    f"{kind} must target {expected!r}, last sight was {target!r}",
                )
            ]
        self._log_input("record_reading", params)
        reading = lv.SightReading(
            kind=kind, value=value, target=target, taken_at=self.t
        )
        self._readings[kind] = reading
        out = [ack_reply("record_reading", kind=kind, value=value, target=target)]
        if lv.BACKSIGHT in self._readings and lv.FORESIGHT in self._readings:
            result = lv.grade_exercise(
                spec.exercise,
                self._readings[lv.BACKSIGHT],
                self._readings[lv.FORESIGHT],
            )
            self._log(
                EVENT_ENGINE,
                "leveling_result",
                {
                    "hi": result.hi,
                    "computed_elevation_b": result.computed_elevation_b,
                    "true_elevation_b": result.true_elevation_b,
                    "error": result.error,
                },
            )
            self._log(EVENT_MILESTONE, "exercise_graded", {"task": self._task})
            out.append(
                {
                    "event": "leveling_result",
                    "hi": result.hi,
                    "computed_elevation_b": result.computed_elevation_b,
                    "error": result.error,
                }
            )
            self._end_task()
        return out

    def _handle_control(self, params: dict) -> list[dict]:
        self._log_input("control", params)
        self._raw_control = (
            params["throttle"],
            params["pitch"],
            params["roll"],
            params["yaw_rate"],
        )
        return [ack_reply("control")]

    def _handle_get_state(self, params: dict) -> list[dict]:
        self._log_input("get_state", params)
        snapshot = {
            "ok": True,
            "mode": self.mode,
            "t": self.t,
            "clock": self.clock,
            "proto": PROTO_VERSION,
            "engine_version": ENGINE_VERSION,
            "scenario": self.scenario.id,
        }
        if self.mode == MODE_LEVELING:
            snapshot["leveling"] = self._leveling_telemetry()
        if self.mode == MODE_FLIGHT:
            snapshot["flight"] = self._flight_telemetry()
        return [snapshot]

    def _handle_end_session(self, params: dict) -> list[dict]:
        self._log_input("end_session", params)
        if self._task is not None:
            if self.mode == MODE_FLIGHT:
                self._finish_flight()
            else:
                self._end_task()
        self.mode = MODE_ENDED
        digest = self.state_hash()
        self._log(EVENT_MILESTONE, "session_end", {"state_hash": digest})
        return [ack_reply("end_session", state_hash=digest)]


# ---------------------------------------------------------------------------
# Trace files
# ---------------------------------------------------------------------------

def save_trace(trace: SessionTrace, path: str | Path) -> None:
    """Write header line, one event line each, then the integrity hash."""
    lines = [json.dumps(trace.header, sort_keys=True, separators=(",", ":"))]
    lines += [
        json.dumps(ev.to_dict(), sort_keys=True, separators=(",", ":"))
        for ev in trace.events
    ]
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)
        fh.write(json.dumps({"sha256": digest}) + "\n")


def load_trace(path: str | Path) -> SessionTrace:
    """Read and integrity-check a trace file."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = raw.splitlines()
    if len(lines) < 2:
        raise CorruptTrace(f"{path}: too short to be a trace")
    body = "\n".join(lines[:-1]) + "\n"
    try:
        trailer = json.loads(lines[-1])
        expected = trailer["sha256"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise CorruptTrace(f"{path}: missing integrity trailer") from exc
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != expected:
        raise CorruptTrace(f"{path}: sha256 mismatch (event data was altered)")
    try:
        header = json.loads(lines[0])
        events = [TraceEvent.from_dict(json.loads(line)) for line in lines[1:-1]]
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CorruptTrace(f"{path}: malformed trace line: {exc}") from exc
    return SessionTrace(header=header, events=events)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def _major(version: str) -> str:
    return version.split(".", 1)[0]


def replay(trace: SessionTrace, scenario: Scenario) -> tuple[Session, dict]:
    """Re-execute a trace's inputs; returns the session and its report.

    The recorded engine events are regenerated from scratch; the final
    state hash is checked against the recorded one when present. The
    source trace is never mutated.
    """
    header = trace.header
    if _major(header.get("engine_version", "")) != _major(ENGINE_VERSION):
        raise VersionMismatch(
            f"trace from engine {header.get('engine_version')!r}, "
            f"this engine is {ENGINE_VERSION}"
        )
    if header.get("scenario_id") != scenario.id:
        raise ScenarioMismatch(
            f"trace recorded on {header.get('scenario_id')!r}, "
            f"got scenario {scenario.id!r}"
        )
    session = Session(scenario, seed_override=header.get("seed"))
    recorded_hash = None
    for ev in trace.events:
        if ev.kind == EVENT_MILESTONE and ev.name == "session_end":
            recorded_hash = ev.payload.get("state_hash")
    for ev in trace.events:
        if ev.kind != EVENT_INPUT:
            continue
        message = {"verb": ev.name, **ev.payload}
        replies = session.apply_message(message)
        if replies and replies[0].get("ok") is False:
            raise CorruptTrace(
                f"recorded input {ev.name!r} rejected on replay: "
                f"{replies[0].get('error')}: {replies[0].get('detail')}"
            )
    if recorded_hash is not None and session.state_hash() != recorded_hash:
        raise CorruptTrace(
            "replayed state hash differs from the recorded one"
        )
    return session, session.build_report()
