"""Protocol endpoints: a FastAPI app with a `/session` WebSocket (one session
per connection) plus static webui assets, and a line-delimited stdio server.

Messages are processed in arrival order by a worker thread; `stop` and
`mouse_state` are applied immediately from the receive side so they take
effect mid-run (flag / cache writes are thread-safe).
"""

from __future__ import annotations

import asyncio
import json
import os
import queue
import sys
import threading

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .protocol import SessionController

_STOP_SENTINEL = object()


def _apply_immediate(controller, data):
    """stop / mouse_state act mid-run; returns True when handled here."""
    op = data.get("op")
    if op == "stop":
        controller.engine.request_stop()
        controller.emit({"ev": "ok", "op": "stop", "id": data.get("id")})
        return True
    if op == "mouse_state":
        controller.engine.mouse_state = (
            data.get("x", 0),
            data.get("y", 0),
            data.get("button", 0),
            data.get("shift", False),
            data.get("ctrl", False),
            data.get("alt", False),
        )
        controller.emit({"ev": "ok", "op": "mouse_state", "id": data.get("id")})
        return True
    return False


def create_app(*, key=None, seed=0, webui_dir=None, max_steps=None):
    app = FastAPI(title="stepboot")

    @app.websocket("/session")
    async def session_ws(ws: WebSocket):
        await ws.accept()
        loop = asyncio.get_running_loop()
        out_q: asyncio.Queue = asyncio.Queue()
        in_q: queue.Queue = queue.Queue()

        def emit(event):
            loop.call_soon_threadsafe(out_q.put_nowait, event)

        controller = SessionController(emit, key=key, seed=seed, max_steps=max_steps)

        def worker():
            while True:
                item = in_q.get()
                if item is _STOP_SENTINEL:
                    break
                try:
                    controller.handle(item)
                except Exception as e:
                    emit({"ev": "error", "type": "internal", "message": str(e),
                          "id": item.get("id") if isinstance(item, dict) else None})

        worker_thread = threading.Thread(target=worker, daemon=True)
        worker_thread.start()

        async def sender():
            while True:
                event = await out_q.get()
                await ws.send_text(json.dumps(event))

        send_task = asyncio.create_task(sender())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    data = json.loads(text)
                except json.JSONDecodeError:
                    emit({"ev": "error", "type": "protocol", "message": "invalid JSON"})
                    continue
                if not _apply_immediate(controller, data):
                    in_q.put(data)
        except WebSocketDisconnect:
            pass
        finally:
            in_q.put(_STOP_SENTINEL)
            send_task.cancel()

    if webui_dir and os.path.isdir(webui_dir):
        app.mount("/", StaticFiles(directory=webui_dir, html=True), name="webui")

    return app


def serve_stdio(infile=None, outfile=None, *, key=None, seed=0, max_steps=None):
    """One session over line-delimited JSON on stdio; returns at EOF."""
    infile = infile if infile is not None else sys.stdin
    outfile = outfile if outfile is not None else sys.stdout
    write_lock = threading.Lock()

    def emit(event):
        with write_lock:
            outfile.write(json.dumps(event) + "\n")
            outfile.flush()

    controller = SessionController(emit, key=key, seed=seed, max_steps=max_steps)
    work: queue.Queue = queue.Queue()

    def reader():
        for line in infile:
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError:
                emit({"ev": "error", "type": "protocol", "message": "invalid JSON"})
                continue
            if not _apply_immediate(controller, data):
                work.put(data)
        work.put(_STOP_SENTINEL)

    reader_thread = threading.Thread(target=reader, daemon=True)
    reader_thread.start()
    while True:
        item = work.get()
        if item is _STOP_SENTINEL:
            break
        try:
            controller.handle(item)
        except Exception as e:
            emit({"ev": "error", "type": "internal", "message": str(e),
                  "id": item.get("id") if isinstance(item, dict) else None})
