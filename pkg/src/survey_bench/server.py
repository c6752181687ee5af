"""Serving layer: stdio loop, raw TCP line protocol, and the WebSocket gateway.

Headless mode reads protocol lines from stdin and writes replies to
stdout. Live mode (``--listen``) serves a single port that speaks three
dialects, sniffed from the first byte of each connection:

  * ``{`` - raw newline-delimited JSON over TCP,
  * anything else - HTTP: static console assets, plus a WebSocket upgrade
    on ``/ws`` carrying one protocol message per text frame.

Live mode also drives the simulation clock: a ticker thread converts wall
time into ``tick`` messages so the engine itself never reads a clock. One
live controller connection is allowed at a time; extra connections are
refused and may retry after the controller disconnects.
"""

from __future__ import annotations

import base64
import hashlib
import socket
import struct
import sys
import threading
import time
from pathlib import Path

from . import TICK_RATE
from .protocol import MessageError, decode_line, encode_line, error_reply
from .session import Session

WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


class SessionHub:
    """Serializes message handling for one session across threads."""

    def __init__(self, session: Session):
        self.session = session
        self._lock = threading.Lock()

    def apply(self, message) -> list[dict]:
        with self._lock:
            return self.session.apply_message(message)

    def apply_line(self, line: str) -> list[dict]:
        try:
            message = decode_line(line)
        except MessageError as exc:
            return [error_reply(exc.code, exc.detail)]
        return self.apply(message)


def run_stdio(session: Session, stdin=None, stdout=None) -> Session:
    """Headless loop: one request line in, reply lines out, until EOF."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    hub = SessionHub(session)
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        for out in hub.apply_line(line):
            stdout.write(encode_line(out) + "\n")
        stdout.flush()
    return session


# ---------------------------------------------------------------------------
# Live gateway
# ---------------------------------------------------------------------------

class _Client:
    """One controller connection; knows how to frame outbound lines."""

    def __init__(self, sock: socket.socket, websocket: bool):
        self.sock = sock
        self.websocket = websocket
        self._send_lock = threading.Lock()

    def send_line(self, line: str) -> None:
        data = line.encode("utf-8")
        if self.websocket:
            frame = _ws_frame(data)
        else:
            frame = data + b"\n"
        with self._send_lock:
            self.sock.sendall(frame)


class Gateway:
    """Single-session live server with wall-clock ticking."""

    def __init__(
        self,
        session: Session,
        host: str = "127.0.0.1",
        port: int = 8765,
        static_dir: str | Path | None = None,
        tick: bool = True,
    ):
        self.hub = SessionHub(session)
        self.host = host
        self.port = port
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self.tick = tick
        self._client: _Client | None = None
        self._client_lock = threading.Lock()
        self._stop = threading.Event()
        self._server_sock: socket.socket | None = None

    # -- lifecycle ---------------------------------------------------------

    def serve_forever(self) -> None:
        self._server_sock = socket.create_server(
            (self.host, self.port), reuse_port=False
        )
        self._server_sock.settimeout(0.5)
        if self.tick:
            threading.Thread(target=self._ticker, daemon=True).start()
        try:
            while not self._stop.is_set():
                try:
                    conn, _ = self._server_sock.accept()
                except socket.timeout:
                    continue
                threading.Thread(
                    target=self._handle_conn, args=(conn,), daemon=True
                ).start()
        finally:
            self._server_sock.close()

    def shutdown(self) -> None:
        self._stop.set()

    # -- ticking -----------------------------------------------------------

    def _ticker(self) -> None:
        period = 1.0 / TICK_RATE
        next_t = time.monotonic() + period
        while not self._stop.is_set():
            now = time.monotonic()
            if now < next_t:
                time.sleep(min(next_t - now, period))
                continue
            missed = max(1, min(int((now - next_t) / period) + 1, TICK_RATE))
            next_t += missed * period
            if self.hub.session.mode == "ended":
                continue
            out = self.hub.apply({"verb": "tick", "n": missed})
            self._push(out[1:])  # telemetry only; the ack has no audience

    def _push(self, messages: list[dict]) -> None:
        client = self._client
        if client is None:
            return
        try:
            for msg in messages:
                client.send_line(encode_line(msg))
        except OSError:
            self._drop_client(client)

    def _drop_client(self, client: _Client) -> None:
        with self._client_lock:
            if self._client is client:
                self._client = None
        try:
            client.sock.close()
        except OSError:
            pass

    # -- connection handling -------------------------------------------------

    def _handle_conn(self, conn: socket.socket) -> None:
        try:
            first = conn.recv(1, socket.MSG_PEEK)
        except OSError:
            conn.close()
            return
        if not first:
            conn.close()
            return
        if first == b"{":
            self._serve_raw(conn)
        else:
            self._serve_http(conn)

    def _claim(self, client: _Client) -> bool:
        with self._client_lock:
            if self._client is not None:
                return False
            self._client = client
            return True

    def _serve_raw(self, conn: socket.socket) -> None:
        client = _Client(conn, websocket=False)
        if not self._claim(client):
            client.send_line(
                encode_line(error_reply("Busy", "another controller is connected"))
            )
            conn.close()
            return
        try:
            buf = b""
            while not self._stop.is_set():
                chunk = conn.recv(65536)
                if not chunk:
                    break
                buf += chunk
                while b"\n" in buf:
                    line, buf = buf.split(b"\n", 1)
                    text = line.decode("utf-8", errors="replace").strip()
                    if not text:
                        continue
                    for out in self.hub.apply_line(text):
                        client.send_line(encode_line(out))
        except OSError:
            pass
        finally:
            self._drop_client(client)

    # -- HTTP + WebSocket ------------------------------------------------------

    def _serve_http(self, conn: socket.socket) -> None:
        try:
            head = _read_http_head(conn)
            if head is None:
                conn.close()
                return
            request_line, headers = head
            parts = request_line.split(" ")
            if len(parts) != 3 or parts[0] != "GET":
                _http_error(conn, 405, "method not allowed")
                return
            path = parts[1].split("?", 1)[0]
            if headers.get("upgrade", "").lower() == "websocket":
                self._serve_websocket(conn, headers)
                return
            self._serve_static(conn, path)
        except OSError:
            conn.close()

    def _serve_static(self, conn: socket.socket, path: str) -> None:
        if self.static_dir is None:
            _http_error(conn, 404, "no static assets configured")
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir)) or not target.is_file():
            _http_error(conn, 404, "not found")
            return
        body = target.read_bytes()
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        head = (
            "HTTP/1.1 200 OK\r\n"
            f"Content-Type: {ctype}\r\n"
            f"Content-Length: {len(body)}\r\n"
            "Connection: close\r\n\r\n"
        )
        conn.sendall(head.encode("ascii") + body)
        conn.close()

    def _serve_websocket(self, conn: socket.socket, headers: dict) -> None:
        key = headers.get("sec-websocket-key")
        if not key:
            _http_error(conn, 400, "missing websocket key")
            return
        accept = base64.b64encode(
            hashlib.sha1((key + WS_GUID).encode("ascii")).digest()
        ).decode("ascii")
        conn.sendall(
            (
                "HTTP/1.1 101 Switching Protocols\r\n"
                "Upgrade: websocket\r\n"
                "Connection: Upgrade\r\n"
                f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
            ).encode("ascii")
        )
        client = _Client(conn, websocket=True)
        if not self._claim(client):
            client.send_line(
                encode_line(error_reply("Busy", "another controller is connected"))
            )
            conn.close()
            return
        try:
            while not self._stop.is_set():
                msg = _ws_read_message(conn)
                if msg is None:
                    break
                text = msg.strip()
                if not text:
                    continue
                for out in self.hub.apply_line(text):
                    client.send_line(encode_line(out))
        except OSError:
            pass
        finally:
            self._drop_client(client)


# ---------------------------------------------------------------------------
# HTTP/WebSocket helpers
# ---------------------------------------------------------------------------

def _read_http_head(conn: socket.socket) -> tuple[str, dict] | None:
    buf = b""
    while b"\r\n\r\n" not in buf:
        chunk = conn.recv(8192)
        if not chunk:
            return None
        buf += chunk
        if len(buf) > 65536:
            return None
    head = buf.split(b"\r\n\r\n", 1)[0].decode("latin-1")
    lines = head.split("\r\n")
    headers = {}
    for line in lines[1:]:
        if ":" in line:
            name, value = line.split(":", 1)
            headers[name.strip().lower()] = value.strip()
    return lines[0], headers


def _http_error(conn: socket.socket, code: int, text: str) -> None:
    body = text.encode("utf-8")
    reason = {400: "Bad Request", 404: "Not Found", 405: "Method Not Allowed"}.get(
        code, "Error"
    )
    conn.sendall(
        (
            f"HTTP/1.1 {code} {reason}\r\n"
            "Content-Type: text/plain; charset=utf-8\r\n"
            f"Content-Length: {len(body)}\r\n"
            "Connection: close\r\n\r\n"
        ).encode("ascii")
        + body
    )
    conn.close()


def _recv_exact(conn: socket.socket, n: int) -> bytes | None:
    buf = b""
    while len(buf) < n:
        chunk = conn.recv(n - len(buf))
        if not chunk:
            return None
        buf += chunk
    return buf


def _ws_read_message(conn: socket.socket) -> str | None:
    """Read one text message; answers pings, returns None on close."""
    while True:
        head = _recv_exact(conn, 2)
        if head is None:
            return None
        b0, b1 = head
        opcode = b0 & 0x0F
        masked = bool(b1 & 0x80)
        length = b1 & 0x7F
        if length == 126:
            ext = _recv_exact(conn, 2)
            if ext is None:
                return None
            length = struct.unpack(">H", ext)[0]
        elif length == 127:
            ext = _recv_exact(conn, 8)
            if ext is None:
                return None
            length = struct.unpack(">Q", ext)[0]
        if length > 1_000_000:
            return None
        mask = b""
        if masked:
            mask = _recv_exact(conn, 4)
            if mask is None:
                return None
        payload = _recv_exact(conn, length) if length else b""
        if payload is None:
            return None
        if masked:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        if opcode == 0x8:  # close
            try:
                conn.sendall(_ws_frame(b"", opcode=0x8))
            except OSError:
                pass
            return None
        if opcode == 0x9:  # ping -> pong
            conn.sendall(_ws_frame(payload, opcode=0xA))
            continue
        if opcode == 0xA:  # pong
            continue
        if opcode in (0x1, 0x2):
            return payload.decode("utf-8", errors="replace")
        return None  # fragmentation unsupported


def _ws_frame(payload: bytes, opcode: int = 0x1) -> bytes:
    head = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head += bytes([n])
    elif n < 65536:
        head += bytes([126]) + struct.pack(">H", n)
    else:
        head += bytes([127]) + struct.pack(">Q", n)
    return head + payload
