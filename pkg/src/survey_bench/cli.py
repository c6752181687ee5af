"""Command-line entry points.

    survey-bench run <scenario> [--listen HOST:PORT] [--static DIR]
                     [--record TRACE] [--report OUT]
    survey-bench replay <trace> [--scenario FILE] --report OUT
    survey-bench grade <trace>... [--csv OUT]
    survey-bench validate <scenario>

``run`` without ``--listen`` is the headless mode: protocol messages on
stdin, replies on stdout. The environment variable SURVEY_BENCH_SEED
overrides the scenario seed for ad-hoc runs and is recorded into the
trace header.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from .errors import EngineError
from .metrics import render_report, rows_for_csv
from .scenario import load_scenario, scenario_from_dict, validate_scenario_file
from .session import Session, load_trace, replay, save_trace
from .server import Gateway, run_stdio

SEED_ENV = "SURVEY_BENCH_SEED"

CSV_COLUMNS = [
    "scenario",
    "trace",
    "task",
    "attempt",
    "completion_time_s",
    "interaction_count",
    "raw_input_events",
    "elevation_error",
    "trailing_accuracy_m",
]


def _seed_override() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    session = Session(scenario, seed_override=_seed_override())
    if args.listen:
        host, _, port = args.listen.rpartition(":")
        gateway = Gateway(
            session,
            host=host or "127.0.0.1",
            port=int(port),
            static_dir=args.static,
            tick=True,
        )
        print(
            f"serving scenario {scenario.id!r} on {host or '127.0.0.1'}:{port} "
            f"(ws endpoint: /ws)",
            file=sys.stderr,
        )
        try:
            gateway.serve_forever()
        except KeyboardInterrupt:
            gateway.shutdown()
    else:
        run_stdio(session)
    if session.mode != "ended":
        session.apply_message({"verb": "end_session"})
    if args.record:
        save_trace(session.record(), args.record)
        print(f"trace written to {args.record}", file=sys.stderr)
    if args.report:
        Path(args.report).write_text(render_report(session.build_report()))
        print(f"report written to {args.report}", file=sys.stderr)
    return 0


def _scenario_for_trace(trace, args):
    if args.scenario:
        return load_scenario(args.scenario)
    doc = trace.header.get("scenario_doc")
    if doc is None:
        raise SystemExit(
            "trace has no embedded scenario; pass --scenario explicitly"
        )
    return scenario_from_dict(doc, base_dir=Path(args.trace).parent)


def _cmd_replay(args) -> int:
    trace = load_trace(args.trace)
    scenario = _scenario_for_trace(trace, args)
    _, report = replay(trace, scenario)
    rendered = render_report(report)
    if args.report:
        Path(args.report).write_text(rendered)
        print(f"report written to {args.report}", file=sys.stderr)
    else:
        sys.stdout.write(rendered)
    return 0


def _cmd_grade(args) -> int:
    rows = []
    for trace_path in args.traces:
        trace = load_trace(trace_path)
        doc = trace.header.get("scenario_doc")
        if doc is None:
            raise SystemExit(f"{trace_path}: no embedded scenario")
        scenario = scenario_from_dict(doc, base_dir=Path(trace_path).parent)
        _, report = replay(trace, scenario)
        rows.extend(rows_for_csv(report, trace_path=str(trace_path)))
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.csv:
            out.close()
            print(f"grades written to {args.csv}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    problems = validate_scenario_file(args.scenario)
    if problems:
        for p in problems:
            print(f"INVALID: {p}", file=sys.stderr)
        return 1
    print(f"{args.scenario}: OK")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="survey-bench",
        description="Deterministic surveying-education simulation engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario live or headless")
    p_run.add_argument("scenario", help="scenario file")
    p_run.add_argument("--listen", help="serve the console gateway on HOST:PORT")
    p_run.add_argument("--static", help="static asset directory for the console")
    p_run.add_argument("--record", help="write the session trace here")
    p_run.add_argument("--report", help="write the metrics report here")
    p_run.set_defaults(func=_cmd_run)

    p_replay = sub.add_parser("replay", help="re-execute a trace and report")
    p_replay.add_argument("trace", help="trace file")
    p_replay.add_argument("--scenario", help="scenario file (default: embedded)")
    p_replay.add_argument("--report", help="write the metrics report here")
    p_replay.set_defaults(func=_cmd_replay)

    p_grade = sub.add_parser("grade", help="batch-grade traces to CSV")
    p_grade.add_argument("traces", nargs="+", help="trace files")
    p_grade.add_argument("--csv", help="output CSV path (default: stdout)")
    p_grade.set_defaults(func=_cmd_grade)

    p_validate = sub.add_parser("validate", help="schema-check a scenario file")
    p_validate.add_argument("scenario", help="scenario file")
    p_validate.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
