/**
 * WebSocket line transport with a drop-not-queue send policy.
 *
 * While disconnected the console shows a banner and every outbound
 * message is dropped on the floor; nothing is queued for later, because
 * stale control or gesture messages replayed after a reconnect would
 * act on a session state the operator no longer sees.
 */

import { InboundMessage, OutboundMessage, decodeLine, encodeMessage } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

// Event parameters are deliberately `any`: the shape must match both the
// DOM WebSocket handler signatures and the bare fakes used in tests.
export interface SocketLike {
  readyState: number;
  send(data: string): void;
  close(): void;
  onopen: ((ev?: any) => void) | null;
  onclose: ((ev?: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
}

const SOCKET_OPEN = 1;

export class Connection {
  status: ConnectionStatus = "closed";
  dropped = 0;
  private socket: SocketLike | null = null;
  private messageHandlers: ((m: InboundMessage) => void)[] = [];
  private statusHandlers: ((s: ConnectionStatus) => void)[] = [];
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly factory: () => SocketLike,
    private readonly reconnectDelayMs = 1000,
  ) {}

  onMessage(fn: (m: InboundMessage) => void): void {
    this.messageHandlers.push(fn);
  }

  onStatus(fn: (s: ConnectionStatus) => void): void {
    this.statusHandlers.push(fn);
  }

  private setStatus(status: ConnectionStatus): void {
    this.status = status;
    for (const fn of this.statusHandlers) fn(status);
  }

  connect(): void {
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
        for (const fn of this.messageHandlers) fn(decoded);
      }
    };
  }

  stop(): void {
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    this.socket?.close();
    this.socket = null;
    this.setStatus("closed");
  }

  /** Send one message; returns false (and counts a drop) when not open. */
  send(message: OutboundMessage): boolean {
    if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) {
      this.dropped += 1;
      return false;
    }
    this.socket.send(encodeMessage(message));
    return true;
  }
}
