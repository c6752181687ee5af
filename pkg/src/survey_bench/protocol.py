"""Line-delimited JSON message protocol spoken by sessions.

One JSON object per line, the same grammar on stdin/stdout, TCP stream
sockets, and the WebSocket gateway. Inbound messages carry a ``verb`` plus
verb-specific fields; replies carry ``ok`` and either an ack/telemetry
payload or an error code. Malformed input is answered with an error
message, never an exception: the session loop must survive arbitrary
bytes.
"""

from __future__ import annotations

import json
import math

PROTO_VERSION = 1

ERR_MALFORMED = "MalformedMessage"
ERR_UNKNOWN_VERB = "UnknownVerb"
ERR_ILLEGAL_IN_MODE = "IllegalInMode"


class MessageError(Exception):
    """Validation failure carrying a protocol error code."""

    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _field(params: dict, name: str, default=None, required=False):
    if name in params:
        return params[name]
    if required:
        raise MessageError(ERR_MALFORMED, f"missing field {name!r}")
    return default


def _number(params, name, lo=None, hi=None, default=None, required=False):
    v = _field(params, name, default, required)
    if v is None:
        return None
    if not _is_number(v):
        raise MessageError(ERR_MALFORMED, f"{name} must be a finite number")
    if lo is not None and v < lo:
        raise MessageError(ERR_MALFORMED, f"{name} must be >= {lo}")
    if hi is not None and v > hi:
        raise MessageError(ERR_MALFORMED, f"{name} must be <= {hi}")
    return float(v)


def _integer(params, name, lo=None, hi=None, default=None, required=False):
    v = _field(params, name, default, required)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise MessageError(ERR_MALFORMED, f"{name} must be an integer")
    if lo is not None and v < lo:
        raise MessageError(ERR_MALFORMED, f"{name} must be >= {lo}")
    if hi is not None and v > hi:
        raise MessageError(ERR_MALFORMED, f"{name} must be <= {hi}")
    return v


def _choice(params, name, choices, required=True):
    v = _field(params, name, required=required)
    if v is None:
        return None
    if not isinstance(v, str) or v not in choices:
        raise MessageError(
            ERR_MALFORMED, f"{name} must be one of {sorted(choices)}, got {v!r}"
        )
    return v


def _string(params, name, required=True):
    v = _field(params, name, required=required)
    if v is None:
        return None
    if not isinstance(v, str) or not v:
        raise MessageError(ERR_MALFORMED, f"{name} must be a non-empty string")
    return v


def validate_message(message) -> tuple[str, dict]:
    """Check shape and field types; returns (verb, normalized params).

    Raises MessageError with a protocol error code on anything off. Extra
    fields are ignored so the grammar can grow.
    """
    if not isinstance(message, dict):
        raise MessageError(ERR_MALFORMED, "message must be a JSON object")
    verb = message.get("verb")
    if not isinstance(verb, str):
        raise MessageError(ERR_MALFORMED, "message needs a string 'verb'")

    if verb == "tick":
        return verb, {"n": _integer(message, "n", lo=1, hi=1_000_000, default=1)}
    if verb == "start_exercise":
        exercise = _choice(message, "exercise", {"leveling", "flight"})
        path = None
        if exercise == "flight":
            path = _choice(message, "path", {"path1", "path2"})
        return verb, {"exercise": exercise, "path": path}
    if verb == "end_exercise":
        return verb, {}
    if verb == "set_leg_length":
        return verb, {
            "leg": _integer(message, "leg", lo=0, hi=2, required=True),
            "length": _number(message, "length", required=True),
        }
    if verb == "rotate_tripod":
        return verb, {"heading": _number(message, "heading", required=True)}
    if verb == "turn_screw":
        return verb, {
            "screw": _choice(message, "screw", {"l", "r", "b"}),
            "clicks": _integer(message, "clicks", lo=-1000, hi=1000, required=True),
        }
    if verb == "sight":
        return verb, {"target": _string(message, "target")}
    if verb == "record_reading":
        return verb, {
            "kind": _choice(message, "kind", {"backsight", "foresight"}),
            "value": _number(message, "value", lo=0.0, required=True),
        }
    if verb == "control":
        return verb, {
            "throttle": _number(message, "throttle", -1.0, 1.0, default=0.0),
            "pitch": _number(message, "pitch", -1.0, 1.0, default=0.0),
            "roll": _number(message, "roll", -1.0, 1.0, default=0.0),
            "yaw_rate": _number(message, "yaw_rate", -1.0, 1.0, default=0.0),
        }
    if verb == "get_state":
        return verb, {}
    if verb == "end_session":
        return verb, {}
    raise MessageError(ERR_UNKNOWN_VERB, f"unknown verb {verb!r}")


def decode_line(line: str) -> dict:
    """Parse one protocol line; raises MessageError on bad JSON."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MessageError(ERR_MALFORMED, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MessageError(ERR_MALFORMED, "protocol lines must be JSON objects")
    return obj


def encode_line(obj: dict) -> str:
    """Render one outbound message as a single line (no trailing newline)."""
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def error_reply(code: str, detail: str = "") -> dict:
    return {"ok": False, "error": code, "detail": detail}


def ack_reply(verb: str, **extra) -> dict:
    reply = {"ok": True, "ack": verb}
    reply.update(extra)
    return reply
