import { describe, expect, it } from "vitest";

import { fitTransform, project } from "../src/map.js";

describe("map projection", () => {
  const pts: [number, number][] = [
    [0, 0],
    [100, 0],
    [100, 60],
  ];

  it("fits all points inside the canvas with margin", () => {
    const tf = fitTransform(pts, 360, 300, 20);
    for (const [x, y] of pts) {
      const [px, py] = project(tf, x, y);
      expect(px).toBeGreaterThanOrEqual(19);
      expect(px).toBeLessThanOrEqual(341);
      expect(py).toBeGreaterThanOrEqual(19);
      expect(py).toBeLessThanOrEqual(281);
    }
  });

  it("preserves aspect ratio (one scale for both axes)", () => {
    const tf = fitTransform(pts, 360, 300, 20);
    const [ax] = project(tf, 0, 0);
    const [bx] = project(tf, 100, 0);
    const [, ay] = project(tf, 0, 0);
    const [, cy] = project(tf, 0, 60);
    expect((bx - ax) / 100).toBeCloseTo(Math.abs(cy - ay) / 60, 9);
  });

  it("north points up on screen", () => {
    const tf = fitTransform(pts, 360, 300, 20);
    const [, southPy] = project(tf, 0, 0);
    const [, northPy] = project(tf, 0, 60);
    expect(northPy).toBeLessThan(southPy);
  });

  it("handles degenerate single-point inputs", () => {
    const tf = fitTransform([[5, 5]], 100, 100, 10);
    const [px, py] = project(tf, 5, 5);
    expect(Number.isFinite(px)).toBe(true);
    expect(Number.isFinite(py)).toBe(true);
  });
});
