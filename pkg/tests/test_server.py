"""Transport endpoints: WebSocket /session and line-delimited stdio."""

import io
import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from stepboot.server import create_app, serve_stdio


@pytest.fixture()
def client():
    app = create_app(key="testkey", seed=0)
    with TestClient(app) as tc:
        yield tc


def collect_until(ws, predicate, limit=50):
    events = []
    for _ in range(limit):
        event = json.loads(ws.receive_text())
        events.append(event)
        if predicate(event):
            return events
    raise AssertionError(f"predicate never satisfied; got {events}")


def test_websocket_repl_roundtrip(client):
    with client.websocket_connect("/session") as ws:
        ws.send_text(json.dumps({"id": 1, "op": "repl", "input": "1+1"}))
        events = collect_until(ws, lambda e: e["ev"] == "result")
        assert events[-1]["repr"] == "2"
        assert events[-1]["id"] == 1


def test_websocket_run_program(client):
    with client.websocket_connect("/session") as ws:
        ws.send_text(
            json.dumps(
                {
                    "id": 1,
                    "op": "load_files",
                    "files": [{"n": "m.py", "c": "print('served')\n"}],
                }
            )
        )
        ws.send_text(json.dumps({"id": 2, "op": "run"}))
        events = collect_until(ws, lambda e: e["ev"] == "done")
        texts = [e["text"] for e in events if e["ev"] == "stdout"]
        assert texts == ["served\n"]


def test_websocket_one_session_per_connection(client):
    with client.websocket_connect("/session") as ws1:
        ws1.send_text(json.dumps({"id": 1, "op": "repl", "input": "x = 5"}))
        collect_until(ws1, lambda e: e["ev"] == "result")
        with client.websocket_connect("/session") as ws2:
            ws2.send_text(json.dumps({"id": 1, "op": "repl", "input": "x"}))
            events = collect_until(ws2, lambda e: e["ev"] == "error")
            assert events[-1]["type"] == "NameError"


def test_websocket_invalid_json(client):
    with client.websocket_connect("/session") as ws:
        ws.send_text("this is not json")
        events = collect_until(ws, lambda e: e["ev"] == "error")
        assert "invalid JSON" in events[-1]["message"]


def test_stdio_server_roundtrip():
    messages = [
        {"id": 1, "op": "repl", "input": "6*7"},
        {"id": 2, "op": "load_files", "files": [{"n": "m.py", "c": "pass"}]},
        {"id": 3, "op": "step", "n": 1},
    ]
    infile = io.StringIO("\n".join(json.dumps(m) for m in messages) + "\n")
    outfile = io.StringIO()
    serve_stdio(infile, outfile, key="k", seed=0)
    events = [json.loads(line) for line in outfile.getvalue().splitlines()]
    results = {e["ev"]: e for e in events}
    assert results["result"]["repr"] == "42"
    assert results["step"]["count"] == 1


def test_stdio_server_as_subprocess():
    messages = [
        {"id": 1, "op": "repl", "input": "2**5"},
    ]
    proc = subprocess.run(
        [sys.executable, "-m", "stepboot.cli", "serve-stdio"],
        input="\n".join(json.dumps(m) for m in messages) + "\n",
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    events = [json.loads(line) for line in proc.stdout.splitlines()]
    assert any(e.get("repr") == "32" for e in events)


def test_static_webui_served_when_present(tmp_path):
    (tmp_path / "index.html").write_text("<html><body>stepboot</body></html>")
    app = create_app(webui_dir=str(tmp_path))
    with TestClient(app) as tc:
        response = tc.get("/")
        assert response.status_code == 200
        assert "stepboot" in response.text
