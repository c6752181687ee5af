import { describe, expect, it } from "vitest";

import {
  decodeLine,
  encodeMessage,
  isFlightTelemetry,
  isLevelingTelemetry,
} from "../src/protocol.js";

describe("protocol encoding", () => {
  it("encodes one JSON object per message", () => {
    const line = encodeMessage({ verb: "turn_screw", screw: "l", clicks: 1 });
    expect(line).not.toContain("\n");
    expect(JSON.parse(line)).toEqual({ verb: "turn_screw", screw: "l", clicks: 1 });
  });

  it("round-trips control messages", () => {
    const msg = {
      verb: "control" as const,
      throttle: 0.5,
      pitch: -0.25,
      roll: 0,
      yaw_rate: 1,
    };
    expect(decodeLine(encodeMessage(msg))).toEqual(msg);
  });

  it("rejects malformed lines instead of throwing", () => {
    expect(decodeLine("{nope")).toBeNull();
    expect(decodeLine("[1,2,3]")).toBeNull();
    expect(decodeLine("42")).toBeNull();
  });

  it("discriminates telemetry kinds", () => {
    const leveling = decodeLine(
      JSON.stringify({ telemetry: "leveling", bubble: { dx: 0, dy: 0, r: 10 } }),
    )!;
    const flight = decodeLine(JSON.stringify({ telemetry: "flight", rpm: 3000 }))!;
    const reply = decodeLine(JSON.stringify({ ok: true, ack: "tick" }))!;
    expect(isLevelingTelemetry(leveling)).toBe(true);
    expect(isFlightTelemetry(flight)).toBe(true);
    expect(isLevelingTelemetry(reply)).toBe(false);
    expect(isFlightTelemetry(reply)).toBe(false);
  });
});
