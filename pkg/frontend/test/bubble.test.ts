import { describe, expect, it } from "vitest";

import {
  Canvas2D,
  LEVEL_COLOR,
  OFF_LEVEL_COLOR,
  bubblePlacement,
  renderBubble,
} from "../src/bubble.js";

function stubCtx(): Canvas2D & { calls: string[] } {
  const calls: string[] = [];
  return {
    calls,
    strokeStyle: "",
    fillStyle: "",
    lineWidth: 0,
    clearRect: () => calls.push("clearRect"),
    beginPath: () => calls.push("beginPath"),
    arc: (...args: number[]) => calls.push(`arc(${args.map((a) => a.toFixed(1)).join(",")})`),
    moveTo: () => calls.push("moveTo"),
    lineTo: () => calls.push("lineTo"),
    stroke: () => calls.push("stroke"),
    fill: () => calls.push("fill"),
  };
}

describe("bubble placement", () => {
  it("centers a centered bubble", () => {
    const draw = bubblePlacement(220, 220, 0, 0, 10, true);
    expect(draw.x).toBe(110);
    expect(draw.y).toBe(110);
  });

  it("scales offsets into the reticle and flips the y axis", () => {
    const draw = bubblePlacement(220, 220, 5, 5, 10, false);
    expect(draw.x).toBeGreaterThan(110);
    expect(draw.y).toBeLessThan(110);
  });

  it("keeps a rim bubble inside the canvas", () => {
    const draw = bubblePlacement(220, 220, 10, 0, 10, false);
    expect(draw.x + draw.bubblePx).toBeLessThanOrEqual(220);
  });

  it("colors purely from the service flag, not from geometry", () => {
    // off-center but the service says level: stays green (render-only law)
    expect(bubblePlacement(220, 220, 6, -3, 10, true).color).toBe(LEVEL_COLOR);
    // centered but the service says not level: stays amber
    expect(bubblePlacement(220, 220, 0, 0, 10, false).color).toBe(OFF_LEVEL_COLOR);
  });

  it("toggles color when the flag toggles, same geometry", () => {
    const a = bubblePlacement(220, 220, 1, 1, 10, false);
    const b = bubblePlacement(220, 220, 1, 1, 10, true);
    expect(a.x).toBe(b.x);
    expect(a.y).toBe(b.y);
    expect(a.color).not.toBe(b.color);
  });
});

describe("renderBubble", () => {
  it("clears and draws reticle plus bubble", () => {
    const ctx = stubCtx();
    renderBubble(ctx, 220, 220, 2, -1, 10, true);
    expect(ctx.calls[0]).toBe("clearRect");
    expect(ctx.calls.filter((c) => c === "fill")).toHaveLength(1);
    expect(ctx.calls.filter((c) => c.startsWith("arc")).length).toBeGreaterThanOrEqual(3);
  });
});
