/**
 * Operator input: discrete gestures and sampled continuous control.
 *
 * Every discrete gesture (screw click, slider commit, sight, reading
 * entry) maps 1:1 onto exactly one protocol message and one gesture-log
 * entry, which is what ties the service's interaction counts back to
 * real user actions. Continuous flight control is sampled from held
 * keys/gamepad at the tick rate and sent as control messages; held keys
 * produce per-tick samples, not per-keypress events.
 */
import { encodeMessage, } from "./protocol.js";
export class GestureLog {
    constructor() {
        this.entries = [];
    }
    record(kind, message) {
        this.entries.push({ kind, message });
    }
    /** Outbound lines, for headless replay of a console session. */
    lines() {
        return this.entries.map((e) => encodeMessage(e.message));
    }
}
/** Discrete gestures; each call sends exactly one message. */
export class Gestures {
    constructor(send, log = new GestureLog()) {
        this.send = send;
        this.log = log;
    }
    dispatch(kind, message) {
        this.log.record(kind, message);
        return this.send(message);
    }
    startLeveling() {
        return this.dispatch("start", {
            verb: "start_exercise",
            exercise: "leveling",
        });
    }
    startFlight(path) {
        return this.dispatch("start", {
            verb: "start_exercise",
            exercise: "flight",
            path,
        });
    }
    endExercise() {
        return this.dispatch("end", { verb: "end_exercise" });
    }
    endSession() {
        return this.dispatch("end", { verb: "end_session" });
    }
    screwClick(screw, clicks) {
        return this.dispatch("screw", { verb: "turn_screw", screw, clicks });
    }
    commitLeg(leg, length) {
        return this.dispatch("slider", { verb: "set_leg_length", leg, length });
    }
    commitHeading(heading) {
        return this.dispatch("slider", { verb: "rotate_tripod", heading });
    }
    sight(target) {
        return this.dispatch("sight", { verb: "sight", target });
    }
    recordReading(kind, value) {
        return this.dispatch("reading", { verb: "record_reading", kind, value });
    }
}
/**
 * Keyboard state tracker: WASD tilts, R/F throttle up/down, Q/E yaw.
 * sample() reads the *currently held* keys; the caller invokes it once
 * per tick and ships the result as a control message.
 */
export class KeyboardSampler {
    constructor() {
        this.pressed = new Set();
    }
    keydown(code) {
        this.pressed.add(code);
    }
    keyup(code) {
        this.pressed.delete(code);
    }
    axis(positive, negative) {
        return (this.pressed.has(positive) ? 1 : 0) - (this.pressed.has(negative) ? 1 : 0);
    }
    sample() {
        // idle throttle holds hover; R/F push it to climb/descend
        const throttle = clamp(0.5 + 0.5 * this.axis("KeyR", "KeyF"));
        return {
            throttle,
            pitch: this.axis("KeyW", "KeyS"),
            roll: this.axis("KeyD", "KeyA"),
            yaw_rate: this.axis("KeyE", "KeyQ"),
        };
    }
}
/** Gamepad overrides keyboard on any axis it deflects past a small threshold. */
export function mergeControls(keyboard, gamepad) {
    if (!gamepad || gamepad.axes.length < 4) {
        return keyboard;
    }
    const [lx, ly, rx, ry] = gamepad.axes;
    const pick = (stick, fallback) => Math.abs(stick) > 0.1 ? clamp(stick) : fallback;
    return {
        throttle: pick(-ly, keyboard.throttle),
        yaw_rate: pick(lx, keyboard.yaw_rate),
        pitch: pick(-ry, keyboard.pitch),
        roll: pick(rx, keyboard.roll),
    };
}
export function controlMessage(state) {
    return { verb: "control", ...state };
}
function clamp(v) {
    return v < -1 ? -1 : v > 1 ? 1 : v;
}
