/**
 * Message grammar shared with the session service (proto 1).
 *
 * One JSON object per line / per WebSocket text frame, both directions.
 * The console only ever *builds* outbound messages and *reads* inbound
 * ones; it never derives new physical quantities from them.
 */

export type Screw = "l" | "r" | "b";
export type SightKind = "backsight" | "foresight";
export type PathId = "path1" | "path2";

export interface ControlState {
  throttle: number;
  pitch: number;
  roll: number;
  yaw_rate: number;
}

export type OutboundMessage =
  | { verb: "start_exercise"; exercise: "leveling" }
  | { verb: "start_exercise"; exercise: "flight"; path: PathId }
  | { verb: "end_exercise" }
  | { verb: "set_leg_length"; leg: number; length: number }
  | { verb: "rotate_tripod"; heading: number }
  | { verb: "turn_screw"; screw: Screw; clicks: number }
  | { verb: "sight"; target: string }
  | { verb: "record_reading"; kind: SightKind; value: number }
  | ({ verb: "control" } & ControlState)
  | { verb: "get_state" }
  | { verb: "end_session" };

export interface BubbleTelemetry {
  dx: number;
  dy: number;
  r: number;
}

export interface LevelingTelemetry {
  telemetry: "leveling";
  t: number;
  task_elapsed_s: number;
  bubble: BubbleTelemetry;
  is_level: boolean;
  misalignment_m: number;
  height_stddev_m: number;
  screws_mm: { l: number; r: number; b: number };
  legs_m: number[];
  heading_rad: number;
  seat_elevation_m: number;
  interaction_count: number;
}

export interface FlightTelemetry {
  telemetry: "flight";
  t: number;
  task_elapsed_s: number;
  position: [number, number, number];
  velocity: [number, number, number];
  yaw: number;
  pitch: number;
  roll: number;
  rpm: number;
  battery: number;
  cross_track_m: number | null;
  waypoints_hit: number;
  waypoint_total: number;
  completed: boolean;
  interaction_count: number;
}

export interface Reply {
  ok: boolean;
  ack?: string;
  error?: string;
  detail?: string;
  [key: string]: unknown;
}

export type InboundMessage = Reply | LevelingTelemetry | FlightTelemetry;

export function encodeMessage(message: OutboundMessage): string {
  return JSON.stringify(message);
}

export function decodeLine(line: string): InboundMessage | null {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    return null;
  }
  return parsed as InboundMessage;
}

export function isLevelingTelemetry(m: InboundMessage): m is LevelingTelemetry {
  return (m as LevelingTelemetry).telemetry === "leveling";
}

export function isFlightTelemetry(m: InboundMessage): m is FlightTelemetry {
  return (m as FlightTelemetry).telemetry === "flight";
}
