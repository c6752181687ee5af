import { describe, expect, it } from "vitest";

import {
  GestureLog,
  Gestures,
  KeyboardSampler,
  controlMessage,
  mergeControls,
} from "../src/input.js";
import { OutboundMessage } from "../src/protocol.js";

function collector(): { sent: OutboundMessage[]; send: (m: OutboundMessage) => boolean } {
  const sent: OutboundMessage[] = [];
  return { sent, send: (m) => (sent.push(m), true) };
}

describe("discrete gestures", () => {
  it("maps one screw click to exactly one message and one log entry", () => {
    const { sent, send } = collector();
    const g = new Gestures(send);
    g.screwClick("l", 1);
    expect(sent).toEqual([{ verb: "turn_screw", screw: "l", clicks: 1 }]);
    expect(g.log.entries).toHaveLength(1);
  });

  it("keeps the log 1:1 with messages across gesture kinds", () => {
    const { sent, send } = collector();
    const g = new Gestures(send);
    g.startLeveling();
    g.commitHeading(0.2);
    g.commitLeg(1, 1.25);
    g.screwClick("b", -2);
    g.sight("A");
    g.recordReading("backsight", 1.5);
    g.endExercise();
    g.endSession();
    expect(sent).toHaveLength(8);
    expect(g.log.entries.map((e) => e.message)).toEqual(sent);
    expect(g.log.lines()).toEqual(sent.map((m) => JSON.stringify(m)));
  });

  it("records gestures even when the connection drops them", () => {
    const g = new Gestures(() => false);
    expect(g.screwClick("r", 1)).toBe(false);
    expect(g.log.entries).toHaveLength(1); // the user still gestured
  });
});

describe("keyboard sampling", () => {
  it("idles at hover throttle with neutral sticks", () => {
    const k = new KeyboardSampler();
    expect(k.sample()).toEqual({ throttle: 0.5, pitch: 0, roll: 0, yaw_rate: 0 });
  });

  it("maps WASD, QE, and RF", () => {
    const k = new KeyboardSampler();
    k.keydown("KeyW");
    k.keydown("KeyD");
    k.keydown("KeyE");
    k.keydown("KeyR");
    expect(k.sample()).toEqual({ throttle: 1, pitch: 1, roll: 1, yaw_rate: 1 });
    k.keyup("KeyW");
    k.keydown("KeyS");
    k.keyup("KeyD");
    k.keydown("KeyA");
    k.keyup("KeyE");
    k.keydown("KeyQ");
    k.keyup("KeyR");
    k.keydown("KeyF");
    expect(k.sample()).toEqual({ throttle: 0, pitch: -1, roll: -1, yaw_rate: -1 });
  });

  it("held keys keep producing samples until released", () => {
    const k = new KeyboardSampler();
    k.keydown("KeyW");
    const ticks = [k.sample(), k.sample(), k.sample()];
    expect(ticks.every((t) => t.pitch === 1)).toBe(true);
    k.keyup("KeyW");
    expect(k.sample().pitch).toBe(0);
  });

  it("opposed keys cancel", () => {
    const k = new KeyboardSampler();
    k.keydown("KeyA");
    k.keydown("KeyD");
    expect(k.sample().roll).toBe(0);
  });
});

describe("gamepad merge", () => {
  const keyboard = { throttle: 0.5, pitch: 1, roll: 0, yaw_rate: 0 };

  it("passes keyboard through without a pad", () => {
    expect(mergeControls(keyboard, null)).toEqual(keyboard);
  });

  it("overrides only deflected axes", () => {
    const merged = mergeControls(keyboard, { axes: [0.0, -0.8, 0.5, 0.0] });
    expect(merged.throttle).toBeCloseTo(0.8);
    expect(merged.roll).toBeCloseTo(0.5);
    expect(merged.pitch).toBe(1); // pad pitch inside threshold, keyboard wins
  });

  it("clamps pad values into the command range", () => {
    const merged = mergeControls(keyboard, { axes: [0, -1.6, 0, 0] });
    expect(merged.throttle).toBe(1);
  });
});

describe("control messages", () => {
  it("wraps a sampled state verbatim", () => {
    expect(controlMessage({ throttle: 0.5, pitch: -1, roll: 0.25, yaw_rate: 0 })).toEqual(
      { verb: "control", throttle: 0.5, pitch: -1, roll: 0.25, yaw_rate: 0 },
    );
  });
});
