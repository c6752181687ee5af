/**
 * Message grammar shared with the session service (proto 1).
 *
 * One JSON object per line / per WebSocket text frame, both directions.
 * The console only ever *builds* outbound messages and *reads* inbound
 * ones; it never derives new physical quantities from them.
 */
export function encodeMessage(message) {
    return JSON.stringify(message);
}
export function decodeLine(line) {
    let parsed;
    try {
        parsed = JSON.parse(line);
    }
    catch {
        return null;
    }
    if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
        return null;
    }
    return parsed;
}
export function isLevelingTelemetry(m) {
    return m.telemetry === "leveling";
}
export function isFlightTelemetry(m) {
    return m.telemetry === "flight";
}
