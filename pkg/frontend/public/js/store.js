/**
 * Snapshot store: the single place inbound service data lands.
 *
 * The console is a strict thin client. This store keeps the latest
 * telemetry snapshots and acks verbatim; nothing in here integrates,
 * filters, or predicts. If the renderer is disabled, replaying the same
 * outbound message log against the service reproduces the exact same
 * session (there is no state of record on this side).
 */
import { isFlightTelemetry, isLevelingTelemetry, } from "./protocol.js";
export class ConsoleStore {
    constructor() {
        this.mode = "orientation";
        this.leveling = null;
        this.flight = null;
        this.path = null;
        this.lastError = null;
        this.lastResult = null;
        this.listeners = [];
    }
    onChange(fn) {
        this.listeners.push(fn);
    }
    emit() {
        for (const fn of this.listeners)
            fn();
    }
    apply(message) {
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
        const reply = message;
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
                    waypoints: reply.waypoints,
                    captureRadius: Number(reply.capture_radius),
                };
            }
            else {
                this.mode = "leveling";
                this.path = null;
            }
            this.lastError = null;
        }
        else if (reply.ack === "end_exercise") {
            this.mode = reply.mode ?? "orientation";
        }
        else if (reply.ack === "end_session") {
            this.mode = "ended";
        }
        else if (reply.event === "leveling_result") {
            this.lastResult = reply;
        }
        else if (typeof reply.mode === "string") {
            this.mode = reply.mode;
        }
        this.emit();
    }
}
