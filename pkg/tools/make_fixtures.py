"""Generate the bundled replay fixtures and their golden reports.

Two fixtures ship with the repo:

* ``leveling_five_attempts`` - five scripted leveling attempts whose graded
  relative errors run 0.4%, 0.25%, 0.38%, 0.12%, 0.05% (first/last and
  0.25% exact in binary floating point), with interaction counts
  30, 28, 32, 20, 15 and completion times 320, 300, 285, 265, 272 s.
* ``drone_paths`` - one scripted chase-controller flight on each waypoint
  path; the straight path lands in the 5-7 interaction band.

The script drives real sessions through the public message protocol, so
every fixture is an honest replayable trace, then freezes the replay
report as the golden file. Regenerate with:

    python tools/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from survey_bench import flight as fl  # noqa: E402
from survey_bench import instrument as ins  # noqa: E402
from survey_bench.metrics import render_report  # noqa: E402
from survey_bench.scenario import scenario_from_dict  # noqa: E402
from survey_bench.session import Session, load_trace, replay, save_trace  # noqa: E402

FIXTURES = ROOT / "fixtures"

# Leveling fixture targets: per-attempt net reading bias over a true
# elevation of 125.0 m (0.5/125 and 0.0625/125 are exactly representable),
# counted interactions, and window lengths in ticks (50 Hz).
ATTEMPTS = [
    {"bs": 1.5, "fs": 1.5, "interactions": 30, "ticks": 16000},
    {"bs": 1.3125, "fs": 1.5, "interactions": 28, "ticks": 15000},
    {"bs": 1.475, "fs": 1.5, "interactions": 32, "ticks": 14250},
    {"bs": 1.15, "fs": 1.5, "interactions": 20, "ticks": 13250},
    {"bs": 1.0625, "fs": 1.5, "interactions": 15, "ticks": 13600},
]
EXPECTED_ERRORS = [0.004, 0.0025, 0.0038, 0.0012, 0.0005]
GAP_TICKS = 250  # orientation pause between attempts

ATTEMPT_HEADINGS = [0.00, 0.05, 0.10, 0.15, 0.20]
ATTEMPT_LEGS = [
    (1.20, 1.21, 1.22),
    (1.20, 1.22, 1.21),
    (1.21, 1.20, 1.23),
    (1.22, 1.21, 1.20),
    (1.20, 1.20, 1.21),
]


def leveling_scenario_doc() -> dict:
    n = 11
    cell = 10.0
    x0 = y0 = -50.0
    heights = []
    for _ in range(n):
        heights.extend(125.0 + 0.015 * (x0 + c * cell) for c in range(n))
    return {
        "format": 1,
        "id": "leveling-five-attempts",
        "seed": 20260809,
        "terrain": {
            "format": 1,
            "origin": [x0, y0],
            "cell_size": cell,
            "n_rows": n,
            "n_cols": n,
            "heights": heights,
        },
        "leveling": {
            "benchmark_a": {"id": "A", "x": 20.0, "y": 0.0, "z": 125.5},
            "benchmark_b": {"id": "B", "x": -20.0, "y": 0.0, "z": 125.0},
            "station": [0.0, 0.0],
            "noise_sd": 0.0,
            "rod_height_max": 4.0,
            "tripod": {"heading": 0.0, "legs": [1.2, 1.2, 1.2], "splay_radius": 0.5},
        },
        "screw_step_mm": 0.1,
    }


def drone_scenario_doc() -> dict:
    n = 31
    cell = 10.0
    return {
        "format": 1,
        "id": "drone-paths",
        "seed": 20260809,
        "terrain": {
            "format": 1,
            "origin": [-50.0, -50.0],
            "cell_size": cell,
            "n_rows": n,
            "n_cols": n,
            "heights": [0.0] * (n * n),
        },
        "flight": {"origin": [0.0, 0.0], "altitude": 30.0, "capture_radius": 2.0},
    }


def send(session: Session, message: dict) -> list[dict]:
    replies = session.apply_message(message)
    assert replies[0].get("ok") is True, (message, replies[0])
    return replies


def screw_click_plan(scenario, heading, legs, message_budget) -> list[dict]:
    """Split the exact leveling screw travel into ``message_budget`` commands.

    Returns turn_screw messages that net to the required clicks, padded
    with +1/-1 wiggles on the back screw (operator dithering) to hit the
    budget exactly.
    """
    tripod = ins.TripodConfig(
        center=scenario.leveling.tripod.center,
        heading=heading,
        leg_lengths=legs,
        leg_splay_radius=scenario.leveling.tripod.leg_splay_radius,
    )
    u_base, v_base = ins.base_tilt(tripod, scenario.terrain)
    solved = ins.solve_screws(-u_base, -v_base)
    step = scenario.screw_step_mm
    clicks = {
        "l": round(solved.l / step),
        "r": round(solved.r / step),
        "b": round(solved.b / step),
    }

    # verify the integer plan still centers the bubble
    u_adj, v_adj = ins.screw_correction(
        ins.ScrewState(
            l=clicks["l"] * step,
            r=clicks["r"] * step,
            b=clicks["b"] * step,
            alpha_screw=solved.alpha_screw,
        )
    )
    x, z = ins.instrument_axis(
        ins.TiltState(u_base=u_base, v_base=v_base, u_adj=u_adj, v_adj=v_adj)
    )
    assert ins.is_level(ins.bubble_from_axis(x, z)), "click quantization too coarse"

    real = [
        {"verb": "turn_screw", "screw": name, "clicks": c}
        for name, c in clicks.items()
        if c != 0
    ]
    pad = message_budget - len(real)
    assert pad >= 0, f"budget {message_budget} too small for {len(real)} commands"
    if pad % 2 == 1:
        # split one real command in two so the wiggle padding stays paired
        first = next((m for m in real if abs(m["clicks"]) > 1), None)
        assert first is not None, "cannot reach an odd message budget"
        sign = 1 if first["clicks"] > 0 else -1
        real.append({"verb": "turn_screw", "screw": first["screw"], "clicks": sign})
        first["clicks"] -= sign
        pad -= 1
    wiggles = []
    for _ in range(pad // 2):
        wiggles.append({"verb": "turn_screw", "screw": "b", "clicks": 1})
        wiggles.append({"verb": "turn_screw", "screw": "b", "clicks": -1})
    return wiggles + real


def build_leveling_trace(scenario) -> Session:
    session = Session(scenario)
    for idx, spec in enumerate(ATTEMPTS):
        send(session, {"verb": "start_exercise", "exercise": "leveling"})
        heading = ATTEMPT_HEADINGS[idx]
        legs = ATTEMPT_LEGS[idx]

        send(session, {"verb": "tick", "n": 100})
        send(session, {"verb": "rotate_tripod", "heading": heading})
        ticks_used = 100
        for leg, length in enumerate(legs):
            send(session, {"verb": "tick", "n": 50})
            send(session, {"verb": "set_leg_length", "leg": leg, "length": length})
            ticks_used += 50

        screw_msgs = screw_click_plan(
            scenario, heading, legs, spec["interactions"] - 4
        )
        for msg in screw_msgs:
            send(session, {"verb": "tick", "n": 5})
            send(session, msg)
            ticks_used += 5

        out = send(session, {"verb": "get_state"})
        assert out[0]["leveling"]["is_level"], f"attempt {idx + 1} not level"

        remaining = spec["ticks"] - ticks_used
        assert remaining > 0
        send(session, {"verb": "tick", "n": remaining})
        send(session, {"verb": "sight", "target": "A"})
        send(
            session,
            {"verb": "record_reading", "kind": "backsight", "value": spec["bs"]},
        )
        send(session, {"verb": "sight", "target": "B"})
        out = send(
            session,
            {"verb": "record_reading", "kind": "foresight", "value": spec["fs"]},
        )
        graded = out[-1]
        assert graded.get("event") == "leveling_result", graded
        assert session.mode == "orientation"
        send(session, {"verb": "tick", "n": GAP_TICKS})
    send(session, {"verb": "end_session"})
    return session


def fly_session_path(session, scenario, path_id, wobbles=()) -> None:
    send(session, {"verb": "start_exercise", "exercise": "flight", "path": path_id})
    path = fl.make_path(path_id, scenario.flight.origin, scenario.flight.capture_radius)
    wobble_queue = dict(wobbles)  # tick index -> roll override
    tick = 0
    while session.mode == "flight":
        assert tick < 20000, f"{path_id} did not complete"
        state = fl.DroneState.from_vector(session._drone_vec)
        ctl = fl.pure_pursuit_input(
            state, path, session._run.waypoints_hit, scenario.physics
        )
        roll = wobble_queue.get(tick, ctl.roll_cmd)
        send(
            session,
            {
                "verb": "control",
                "throttle": ctl.throttle,
                "pitch": ctl.pitch_cmd,
                "roll": roll,
                "yaw_rate": ctl.yaw_rate_cmd,
            },
        )
        send(session, {"verb": "tick", "n": 5})
        tick += 5


def build_drone_trace(scenario) -> Session:
    session = Session(scenario)
    fly_session_path(session, scenario, "path1")
    send(session, {"verb": "tick", "n": GAP_TICKS})
    fly_session_path(session, scenario, "path2")
    send(session, {"verb": "end_session"})
    return session


def freeze(name: str, scenario_doc: dict, session: Session) -> dict:
    FIXTURES.mkdir(exist_ok=True)
    scenario_path = FIXTURES / f"{name}.scenario.json"
    trace_path = FIXTURES / f"{name}.trace"
    report_path = FIXTURES / f"{name}.report.json"

    scenario_path.write_text(json.dumps(scenario_doc, indent=2) + "\n")
    save_trace(session.record(), trace_path)

    scenario = scenario_from_dict(scenario_doc)
    trace = load_trace(trace_path)
    _, report_a = replay(trace, scenario)
    _, report_b = replay(trace, scenario)
    rendered = render_report(report_a)
    assert rendered == render_report(report_b), "replay is not byte-stable"
    report_path.write_text(rendered)
    return report_a


def main() -> None:
    lev_doc = leveling_scenario_doc()
    lev_scenario = scenario_from_dict(lev_doc)
    lev_session = build_leveling_trace(lev_scenario)
    report = freeze("leveling_five_attempts", lev_doc, lev_session)

    errors = [a["elevation_error"] for a in report["attempts"]]
    counts = [a["interaction_count"] for a in report["attempts"]]
    times = [a["completion_time_s"] for a in report["attempts"]]
    assert errors[0] == 0.004 and errors[-1] == 0.0005, errors
    for got, want in zip(errors, EXPECTED_ERRORS):
        assert abs(got - want) < 1e-12, (got, want)
    assert counts == [s["interactions"] for s in ATTEMPTS], counts
    assert times == [s["ticks"] * 0.02 for s in ATTEMPTS], times
    print("leveling_five_attempts:")
    print(f"  errors       {errors}")
    print(f"  interactions {counts}")
    print(f"  times        {times}")

    drone_doc = drone_scenario_doc()
    drone_scenario = scenario_from_dict(drone_doc)
    drone_session = build_drone_trace(drone_scenario)
    report = freeze("drone_paths", drone_doc, drone_session)
    rows = {a["task"]: a for a in report["attempts"]}
    p1, p2 = rows["path1"], rows["path2"]
    assert 5 <= p1["interaction_count"] <= 7, p1
    assert p1["trailing_accuracy_m"] < 2.0, p1
    assert p2["trailing_accuracy_m"] > p1["trailing_accuracy_m"], (p1, p2)
    print("drone_paths:")
    for task in ("path1", "path2"):
        a = rows[task]
        print(
            f"  {task}: accuracy {a['trailing_accuracy_m']:.3f} m, "
            f"{a['interaction_count']} interactions, "
            f"{a['completion_time_s']:.1f} s"
        )


if __name__ == "__main__":
    main()
