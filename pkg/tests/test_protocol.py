"""Protocol grammar and robustness tests.

The fuzz test is the hard contract: no byte sequence may crash a session,
and every rejected message must leave the state untouched.
"""

import json

import numpy as np
import pytest

from survey_bench.protocol import (
    MessageError,
    decode_line,
    encode_line,
    validate_message,
)
from survey_bench.scenario import scenario_from_dict
from survey_bench.session import Session

from conftest import flight_scenario_doc, leveling_scenario_doc


class TestDecode:
    def test_round_trip(self):
        msg = {"verb": "tick", "n": 3}
        assert decode_line(encode_line(msg)) == msg

    def test_bad_json(self):
        with pytest.raises(MessageError):
            decode_line("{not json")

    def test_non_object(self):
        with pytest.raises(MessageError):
            decode_line("[1, 2, 3]")


class TestValidation:
    def test_verbs_accept_good_messages(self):
        good = [
            {"verb": "tick"},
            {"verb": "tick", "n": 50},
            {"verb": "start_exercise", "exercise": "leveling"},
            {"verb": "start_exercise", "exercise": "flight", "path": "path2"},
            {"verb": "end_exercise"},
            {"verb": "set_leg_length", "leg": 2, "length": 1.3},
            {"verb": "rotate_tripod", "heading": -0.4},
            {"verb": "turn_screw", "screw": "b", "clicks": -3},
            {"verb": "sight", "target": "A"},
            {"verb": "record_reading", "kind": "foresight", "value": 1.25},
            {"verb": "control", "throttle": 0.5, "pitch": -1.0},
            {"verb": "get_state"},
            {"verb": "end_session"},
        ]
        for msg in good:
            verb, _ = validate_message(msg)
            assert verb == msg["verb"]

    @pytest.mark.parametrize(
        "msg",
        [
            "string",
            {"no_verb": 1},
            {"verb": 42},
            {"verb": "warp"},
            {"verb": "tick", "n": 0},
            {"verb": "tick", "n": 2.5},
            {"verb": "tick", "n": True},
            {"verb": "start_exercise", "exercise": "archery"},
            {"verb": "start_exercise", "exercise": "flight"},  # path required
            {"verb": "set_leg_length", "leg": 3, "length": 1.2},
            {"verb": "set_leg_length", "leg": 0, "length": float("nan")},
            {"verb": "turn_screw", "screw": "x", "clicks": 1},
            {"verb": "turn_screw", "screw": "l", "clicks": 1.5},
            {"verb": "sight", "target": ""},
            {"verb": "record_reading", "kind": "backsight", "value": -1.0},
            {"verb": "control", "pitch": 7.5},
            {"verb": "control", "pitch": float("inf")},
        ],
    )
    def test_bad_messages_rejected(self, msg):
        with pytest.raises(MessageError):
            validate_message(msg)

    def test_extra_fields_ignored(self):
        verb, params = validate_message({"verb": "tick", "n": 2, "junk": "x"})
        assert verb == "tick"
        assert "junk" not in params


def random_message(rng):
    """Arbitrary JSON-shaped garbage plus near-miss protocol messages."""
    verbs = [
        "tick", "start_exercise", "end_exercise", "set_leg_length",
        "rotate_tripod", "turn_screw", "sight", "record_reading",
        "control", "get_state", "end_session", "warp", "", None, 13,
    ]
    fields = {
        "n": [0, 1, 7, -3, 2.5, "many", None, True],
        "exercise": ["leveling", "flight", "archery", 7, None],
        "path": ["path1", "path2", "path9", 3],
        "leg": [0, 1, 2, 3, -1, "left"],
        "length": [1.2, 0.1, 5.0, float("nan"), float("inf"), "tall"],
        "heading": [0.0, 3.2, -9.9, "north", None],
        "screw": ["l", "r", "b", "x", 4],
        "clicks": [1, -5, 2000, 0.5, "two"],
        "target": ["A", "B", "C", "", 9],
        "kind": ["backsight", "foresight", "sideways", 1],
        "value": [1.0, -2.0, 9.0, float("nan"), "tall"],
        "throttle": [0.5, -1.5, 2.0, "fast"],
        "pitch": [0.1, -3.0, float("inf")],
        "roll": [0.0, 5.0],
        "yaw_rate": [0.2, -8.0],
    }
    kind = rng.integers(0, 4)
    if kind == 0:
        return rng.choice(["{broken", "[1,2", "", "null", "true", '"str"', "12"])
    msg = {}
    if kind != 1:
        msg["verb"] = verbs[rng.integers(0, len(verbs))]
    for name in rng.permutation(list(fields)):
        if rng.random() < 0.25:
            options = fields[name]
            msg[name] = options[rng.integers(0, len(options))]
    return json.dumps(msg, default=str)


class TestFuzz:
    @pytest.mark.parametrize("doc_factory", [leveling_scenario_doc, flight_scenario_doc])
    def test_fuzzing_never_crashes_or_corrupts(self, doc_factory):
        scenario = scenario_from_dict(doc_factory())
        session = Session(scenario)
        # put the session in an exercise so mode guards are exercised too
        if scenario.leveling:
            session.apply_message({"verb": "start_exercise", "exercise": "leveling"})
        else:
            session.apply_message(
                {"verb": "start_exercise", "exercise": "flight", "path": "path1"}
            )
        rng = np.random.default_rng(2024)
        rejected = 0
        for _ in range(5000):
            line = random_message(rng)
            before = session.state_hash()
            try:
                msg = decode_line(line)
            except MessageError:
                rejected += 1
                assert session.state_hash() == before
                continue
            replies = session.apply_message(msg)
            assert isinstance(replies, list) and replies
            if replies[0].get("ok") is False:
                rejected += 1
                assert session.state_hash() == before
                assert replies[0]["error"] in {
                    "MalformedMessage",
                    "UnknownVerb",
                    "IllegalInMode",
                    "NotLevel",
                    "RodOutOfRange",
                    "WrongTarget",
                    "OutOfRange",
                    "OutOfBounds",
                }
        assert rejected > 1000  # the generator really does produce garbage
