/**
 * HUD field formatting: service numbers in, display strings out.
 * Pure presentation; every value originates in a telemetry message.
 */

import { FlightTelemetry, LevelingTelemetry } from "./protocol.js";

const DEG = 180 / Math.PI;

export interface HudFields {
  rpm: string;
  battery: string;
  pitch: string;
  roll: string;
  yaw: string;
  heading: string;
  altitude: string;
  cross_track: string;
  waypoints: string;
}

export function formatHud(t: FlightTelemetry): HudFields {
  return {
    rpm: `${Math.round(t.rpm)}`,
    battery: `${(t.battery * 100).toFixed(0)}%`,
    pitch: `${(t.pitch * DEG).toFixed(1)}°`,
    roll: `${(t.roll * DEG).toFixed(1)}°`,
    yaw: `${(t.yaw * DEG).toFixed(1)}°`,
    heading: formatHeading(t.yaw),
    altitude: `${t.position[2].toFixed(1)} m`,
    cross_track:
      t.cross_track_m === null ? "--" : `${t.cross_track_m.toFixed(2)} m`,
    waypoints: `${t.waypoints_hit}/${t.waypoint_total}`,
  };
}

/** Compass heading in degrees clockwise from north (service yaw is CCW from east). */
export function formatHeading(yaw: number): string {
  let deg = 90 - yaw * DEG;
  deg = ((deg % 360) + 360) % 360;
  return `${deg.toFixed(0).padStart(3, "0")}°`;
}

export interface MetricStrip {
  elapsed: string;
  interactions: string;
}

export function formatElapsed(seconds: number): string {
  const whole = Math.floor(seconds);
  const mm = Math.floor(whole / 60);
  const ss = whole % 60;
  return `${String(mm).padStart(2, "0")}:${String(ss).padStart(2, "0")}`;
}

export function metricStrip(
  t: LevelingTelemetry | FlightTelemetry,
): MetricStrip {
  return {
    elapsed: formatElapsed(t.task_elapsed_s),
    interactions: `${t.interaction_count}`,
  };
}

export interface LevelingFields {
  bubble_offset: string;
  misalignment: string;
  height_spread: string;
  seat: string;
  level: string;
}

export function formatLeveling(t: LevelingTelemetry): LevelingFields {
  const off = Math.hypot(t.bubble.dx, t.bubble.dy);
  return {
    bubble_offset: `${off.toFixed(2)} / ${t.bubble.r.toFixed(0)}`,
    misalignment: `${t.misalignment_m.toFixed(3)} m`,
    height_spread: `${t.height_stddev_m.toFixed(3)} m`,
    seat: `${t.seat_elevation_m.toFixed(3)} m`,
    level: t.is_level ? "LEVEL" : "OFF LEVEL",
  };
}
