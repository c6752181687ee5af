"""Bundled-fixture regression tests (both fixtures, golden reports, CLI grade)."""

import json
from pathlib import Path

import pytest

from survey_bench.cli import main
from survey_bench.metrics import render_report
from survey_bench.scenario import scenario_from_dict
from survey_bench.session import load_trace, replay

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def replay_fixture(name):
    doc = json.loads((FIXTURES / f"{name}.scenario.json").read_text())
    trace = load_trace(FIXTURES / f"{name}.trace")
    _, report = replay(trace, scenario_from_dict(doc))
    return report


class TestLevelingFixture:
    def test_matches_golden(self):
        report = replay_fixture("leveling_five_attempts")
        golden = (FIXTURES / "leveling_five_attempts.report.json").read_text()
        assert render_report(report) == golden

    def test_completion_times(self):
        report = replay_fixture("leveling_five_attempts")
        times = [a["completion_time_s"] for a in report["attempts"]]
        assert times == [320.0, 300.0, 285.0, 265.0, 272.0]


class TestDroneFixture:
    def test_matches_golden(self):
        report = replay_fixture("drone_paths")
        golden = (FIXTURES / "drone_paths.report.json").read_text()
        assert render_report(report) == golden

    def test_path1_interaction_band(self):
        report = replay_fixture("drone_paths")
        rows = {a["task"]: a for a in report["attempts"]}
        assert 5 <= rows["path1"]["interaction_count"] <= 7

    def test_path_accuracy_ordering(self):
        report = replay_fixture("drone_paths")
        rows = {a["task"]: a for a in report["attempts"]}
        assert rows["path1"]["trailing_accuracy_m"] < 2.0
        assert rows["path2"]["trailing_accuracy_m"] > rows["path1"][
            "trailing_accuracy_m"
        ]

    def test_paths_completed(self):
        report = replay_fixture("drone_paths")
        for a in report["attempts"]:
            assert a["completion_time_s"] > 0


class TestGradeCli:
    def test_batch_grades_both_fixtures(self, tmp_path, capsys):
        out = tmp_path / "grades.csv"
        rc = main(
            [
                "grade",
                str(FIXTURES / "leveling_five_attempts.trace"),
                str(FIXTURES / "drone_paths.trace"),
                "--csv",
                str(out),
            ]
        )
        capsys.readouterr()
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 5 + 2  # header, five leveling, two flight rows
        assert lines[1].split(",")[0] == "leveling-five-attempts"
        assert lines[-1].split(",")[2] == "path2"

    def test_grades_are_deterministic(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            assert (
                main(["grade", str(FIXTURES / "drone_paths.trace"), "--csv", str(path)])
                == 0
            )
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
