import { describe, expect, it, vi } from "vitest";

import { Connection, SocketLike } from "../src/connection.js";

class FakeSocket implements SocketLike {
  readyState = 0;
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;

  open(): void {
    this.readyState = 1;
    this.onopen?.();
  }

  drop(): void {
    this.readyState = 3;
    this.onclose?.();
  }

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.readyState = 3;
  }

  receive(line: string): void {
    this.onmessage?.({ data: line });
  }
}

describe("connection", () => {
  it("sends while open", () => {
    const sock = new FakeSocket();
    const conn = new Connection(() => sock);
    conn.connect();
    sock.open();
    expect(conn.send({ verb: "get_state" })).toBe(true);
    expect(sock.sent).toEqual(['{"verb":"get_state"}']);
  });

  it("drops, never queues, while disconnected", () => {
    const sock = new FakeSocket();
    const conn = new Connection(() => sock);
    conn.connect(); // still connecting, not open
    expect(conn.send({ verb: "get_state" })).toBe(false);
    sock.open();
    sock.drop();
    expect(conn.send({ verb: "tick" } as never)).toBe(false);
    expect(conn.dropped).toBe(2);
    sock.sent.length = 0;
    // nothing buffered flushes on reconnect
    const again = new FakeSocket();
    conn.stop();
    expect(again.sent).toEqual([]);
  });

  it("surfaces status transitions for the banner", () => {
    const sock = new FakeSocket();
    const conn = new Connection(() => sock);
    const seen: string[] = [];
    conn.onStatus((s) => seen.push(s));
    conn.connect();
    sock.open();
    sock.drop();
    conn.stop();
    expect(seen.slice(0, 3)).toEqual(["connecting", "open", "closed"]);
  });

  it("reconnects after the delay", () => {
    vi.useFakeTimers();
    const sockets: FakeSocket[] = [];
    const conn = new Connection(() => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    }, 500);
    conn.connect();
    sockets[0].open();
    sockets[0].drop();
    expect(sockets).toHaveLength(1);
    vi.advanceTimersByTime(600);
    expect(sockets).toHaveLength(2);
    conn.stop();
    vi.useRealTimers();
  });

  it("decodes inbound lines and ignores junk", () => {
    const sock = new FakeSocket();
    const conn = new Connection(() => sock);
    const got: unknown[] = [];
    conn.onMessage((m) => got.push(m));
    conn.connect();
    sock.open();
    sock.receive('{"ok": true, "ack": "tick"}');
    sock.receive("{broken");
    expect(got).toEqual([{ ok: true, ack: "tick" }]);
  });
});
