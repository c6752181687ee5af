/**
 * Circular-level reticle renderer.
 *
 * Draws whatever (dx, dy, r) the service sent, scaled into the canvas,
 * and colors the bubble from the service's is_level flag alone. No
 * client-side leveling math: if the service says level, the bubble is
 * green wherever it sits.
 */

export interface ReticleDraw {
  x: number;
  y: number;
  radiusPx: number;
  bubblePx: number;
  color: string;
}

export const LEVEL_COLOR = "#2e9e4f";
export const OFF_LEVEL_COLOR = "#d98f27";

/** Minimal 2D-context surface the renderer needs (testable without DOM). */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  fill(): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
}

export function bubblePlacement(
  width: number,
  height: number,
  dx: number,
  dy: number,
  r: number,
  isLevel: boolean,
): ReticleDraw {
  const margin = 8;
  const radiusPx = Math.min(width, height) / 2 - margin;
  const bubblePx = radiusPx * 0.18;
  const scale = (radiusPx - bubblePx) / r;
  // screen y grows downward; bubble dy grows "away", so flip it
  const x = width / 2 + dx * scale;
  const y = height / 2 - dy * scale;
  return {
    x,
    y,
    radiusPx,
    bubblePx,
    color: isLevel ? LEVEL_COLOR : OFF_LEVEL_COLOR,
  };
}

export function renderBubble(
  ctx: Canvas2D,
  width: number,
  height: number,
  dx: number,
  dy: number,
  r: number,
  isLevel: boolean,
): ReticleDraw {
  const draw = bubblePlacement(width, height, dx, dy, r, isLevel);
  const cx = width / 2;
  const cy = height / 2;
  ctx.clearRect(0, 0, width, height);

  ctx.strokeStyle = "#555";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(cx, cy, draw.radiusPx, 0, 2 * Math.PI);
  ctx.stroke();
  // target ring: the leveled region at the center
  ctx.beginPath();
  ctx.arc(cx, cy, draw.radiusPx * 0.2, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(cx - draw.radiusPx, cy);
  ctx.lineTo(cx + draw.radiusPx, cy);
  ctx.moveTo(cx, cy - draw.radiusPx);
  ctx.lineTo(cx, cy + draw.radiusPx);
  ctx.stroke();

  ctx.fillStyle = draw.color;
  ctx.beginPath();
  ctx.arc(draw.x, draw.y, draw.bubblePx, 0, 2 * Math.PI);
  ctx.fill();
  return draw;
}
