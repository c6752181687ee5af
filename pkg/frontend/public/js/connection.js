/**
 * WebSocket line transport with a drop-not-queue send policy.
 *
 * While disconnected the console shows a banner and every outbound
 * message is dropped on the floor; nothing is queued for later, because
 * stale control or gesture messages replayed after a reconnect would
 * act on a session state the operator no longer sees.
 */
import { decodeLine, encodeMessage } from "./protocol.js";
const SOCKET_OPEN = 1;
export class Connection {
    constructor(factory, reconnectDelayMs = 1000) {
        this.factory = factory;
        this.reconnectDelayMs = reconnectDelayMs;
        this.status = "closed";
        this.dropped = 0;
        this.socket = null;
        this.messageHandlers = [];
        this.statusHandlers = [];
        this.reconnectTimer = null;
    }
    onMessage(fn) {
        this.messageHandlers.push(fn);
    }
    onStatus(fn) {
        this.statusHandlers.push(fn);
    }
    setStatus(status) {
        this.status = status;
        for (const fn of this.statusHandlers)
            fn(status);
    }
    connect() {
        this.setStatus("connecting");
        const socket = this.factory();
        this.socket = socket;
        socket.onopen = () => this.setStatus("open");
        socket.onclose = () => {
            this.setStatus("closed");
            this.socket = null;
            this.reconnectTimer = setTimeout(() => this.connect(), this.reconnectDelayMs);
        };
        socket.onmessage = (ev) => {
            const decoded = decodeLine(String(ev.data));
            if (decoded !== null) {
                for (const fn of this.messageHandlers)
                    fn(decoded);
            }
        };
    }
    stop() {
        if (this.reconnectTimer !== null) {
            clearTimeout(this.reconnectTimer);
            this.reconnectTimer = null;
        }
        this.socket?.close();
        this.socket = null;
        this.setStatus("closed");
    }
    /** Send one message; returns false (and counts a drop) when not open. */
    send(message) {
        if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) {
            this.dropped += 1;
            return false;
        }
        this.socket.send(encodeMessage(message));
        return true;
    }
}
