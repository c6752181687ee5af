/**
 * Console entry point: DOM wiring only. All state lives in the service;
 * this file moves telemetry into widgets and gestures into messages.
 */
import { Connection } from "./connection.js";
import { renderBubble } from "./bubble.js";
import { GestureLog, Gestures, KeyboardSampler, controlMessage, mergeControls, } from "./input.js";
import { formatHud, formatLeveling, metricStrip } from "./hud.js";
import { renderMap } from "./map.js";
import { ConsoleStore } from "./store.js";
const TICK_MS = 20;
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function setText(id, text) {
    el(id).textContent = text;
}
const store = new ConsoleStore();
const log = new GestureLog();
const connection = new Connection(() => new WebSocket(`ws://${location.host}/ws`));
const gestures = new Gestures((m) => connection.send(m), log);
const keyboard = new KeyboardSampler();
const trail = [];
connection.onMessage((m) => store.apply(m));
connection.onStatus((status) => {
    el("banner").style.display = status === "open" ? "none" : "block";
    setText("banner", status === "connecting" ? "reconnecting..." : "disconnected");
});
document.addEventListener("keydown", (ev) => {
    if (!(ev.target instanceof HTMLInputElement))
        keyboard.keydown(ev.code);
});
document.addEventListener("keyup", (ev) => keyboard.keyup(ev.code));
// continuous control: sample held keys/gamepad once per tick in flight mode
setInterval(() => {
    if (store.mode !== "flight")
        return;
    const pads = navigator.getGamepads ? navigator.getGamepads() : [];
    const pad = pads && pads[0] ? { axes: pads[0].axes } : null;
    connection.send(controlMessage(mergeControls(keyboard.sample(), pad)));
}, TICK_MS);
// -- panel wiring ------------------------------------------------------------
el("start-leveling").onclick = () => gestures.startLeveling();
el("start-path1").onclick = () => gestures.startFlight("path1");
el("start-path2").onclick = () => gestures.startFlight("path2");
el("end-exercise").onclick = () => gestures.endExercise();
for (const screw of ["l", "r", "b"]) {
    el(`screw-${screw}-plus`).onclick = () => gestures.screwClick(screw, 1);
    el(`screw-${screw}-minus`).onclick = () => gestures.screwClick(screw, -1);
}
for (let leg = 0; leg < 3; leg++) {
    const slider = el(`leg-${leg}`);
    slider.onchange = () => gestures.commitLeg(leg, Number(slider.value));
    slider.oninput = () => setText(`leg-${leg}-value`, `${slider.value} m`);
}
const headingSlider = el("heading");
headingSlider.onchange = () => gestures.commitHeading(Number(headingSlider.value));
headingSlider.oninput = () => setText("heading-value", `${Number(headingSlider.value).toFixed(2)} rad`);
el("sight-a").onclick = () => gestures.sight("A");
el("sight-b").onclick = () => gestures.sight("B");
el("record-bs").onclick = () => gestures.recordReading("backsight", Number(el("reading").value));
el("record-fs").onclick = () => gestures.recordReading("foresight", Number(el("reading").value));
// -- rendering ----------------------------------------------------------------
const bubbleCanvas = el("bubble");
const mapCanvas = el("map");
store.onChange(() => {
    el("panel-orientation").style.display =
        store.mode === "orientation" || store.mode === "ended" ? "block" : "none";
    el("panel-leveling").style.display = store.mode === "leveling" ? "block" : "none";
    el("panel-flight").style.display = store.mode === "flight" ? "block" : "none";
    if (store.lastError) {
        setText("status", `${store.lastError.error}: ${store.lastError.detail ?? ""}`);
    }
    else {
        setText("status", store.mode);
    }
    const lev = store.leveling;
    if (lev && store.mode === "leveling") {
        const ctx = bubbleCanvas.getContext("2d");
        if (ctx) {
            renderBubble(ctx, bubbleCanvas.width, bubbleCanvas.height, lev.bubble.dx, lev.bubble.dy, lev.bubble.r, lev.is_level);
        }
        const fields = formatLeveling(lev);
        setText("lev-state", fields.level);
        setText("lev-offset", fields.bubble_offset);
        setText("lev-misalignment", fields.misalignment);
        setText("lev-spread", fields.height_spread);
        setText("lev-seat", fields.seat);
        const strip = metricStrip(lev);
        setText("elapsed", strip.elapsed);
        setText("interactions", strip.interactions);
    }
    const fl = store.flight;
    if (fl && store.path) {
        trail.push([fl.position[0], fl.position[1]]);
        if (trail.length > 3000)
            trail.shift();
        const hud = formatHud(fl);
        setText("hud-rpm", hud.rpm);
        setText("hud-battery", hud.battery);
        setText("hud-pitch", hud.pitch);
        setText("hud-roll", hud.roll);
        setText("hud-yaw", hud.yaw);
        setText("hud-heading", hud.heading);
        setText("hud-altitude", hud.altitude);
        setText("hud-cross-track", hud.cross_track);
        setText("hud-waypoints", hud.waypoints);
        const strip = metricStrip(fl);
        setText("elapsed", strip.elapsed);
        setText("interactions", strip.interactions);
        const ctx = mapCanvas.getContext("2d");
        if (ctx) {
            renderMap(ctx, mapCanvas.width, mapCanvas.height, store.path, trail, [fl.position[0], fl.position[1]], fl.waypoints_hit);
        }
    }
    if (store.lastResult) {
        const err = Number(store.lastResult.error);
        setText("lev-result", `computed ${Number(store.lastResult.computed_elevation_b).toFixed(3)} m, ` +
            `error ${(err * 100).toFixed(3)}%`);
    }
});
connection.connect();
