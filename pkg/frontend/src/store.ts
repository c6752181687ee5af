/**
 * Snapshot store: the single place inbound service data lands.
 *
 * The console is a strict thin client. This store keeps the latest
 * telemetry snapshots and acks verbatim; nothing in here integrates,
 * filters, or predicts. If the renderer is disabled, replaying the same
 * outbound message log against the service reproduces the exact same
 * session (there is no state of record on this side).
 */

import {
  FlightTelemetry,
  InboundMessage,
  LevelingTelemetry,
  Reply,
  isFlightTelemetry,
  isLevelingTelemetry,
} from "./protocol.js";

export type Mode = "orientation" | "leveling" | "flight" | "ended";

export interface PathInfo {
  id: string;
  waypoints: [number, number, number][];
  captureRadius: number;
}

export class ConsoleStore {
  mode: Mode = "orientation";
  leveling: LevelingTelemetry | null = null;
  flight: FlightTelemetry | null = null;
  path: PathInfo | null = null;
  lastError: Reply | null = null;
  lastResult: Record<string, unknown> | null = null;
  private listeners: (() => void)[] = [];

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  apply(message: InboundMessage): void {
    if (isLevelingTelemetry(message)) {
      this.leveling = message;
      this.mode = "leveling";
      this.emit();
      return;
    }
    if (isFlightTelemetry(message)) {
      this.flight = message;
      this.mode = message.completed ? "orientation" : "flight";
      this.emit();
      return;
    }
    const reply = message as Reply;
    if (reply.ok === false) {
      this.lastError = reply;
      this.emit();
      return;
    }
    if (reply.ack === "start_exercise") {
      if (reply.exercise === "flight") {
        this.mode = "flight";
        this.path = {
          id: String(reply.path),
          waypoints: reply.waypoints as [number, number, number][],
          captureRadius: Number(reply.capture_radius),
        };
      } else {
        this.mode = "leveling";
        this.path = null;
      }
      this.lastError = null;
    } else if (reply.ack === "end_exercise") {
      this.mode = (reply.mode as Mode) ?? "orientation";
    } else if (reply.ack === "end_session") {
      this.mode = "ended";
    } else if (reply.event === "leveling_result") {
      this.lastResult = reply as Record<string, unknown>;
    } else if (typeof reply.mode === "string") {
      this.mode = reply.mode as Mode;
    }
    this.emit();
  }
}
