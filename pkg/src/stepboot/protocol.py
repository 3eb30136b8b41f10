"""Wire protocol between the engine and clients.

JSON messages, one per frame/line. Every client message carries an `id`
echoed on the events it produces. The controller is transport-agnostic and
synchronous: `handle()` processes one message, emitting engine events via a
callback. `stop` and `mouse_state` are safe to apply from another thread
mid-run (they only touch a flag / the mouse cache).
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, TypeAdapter, ValidationError

from .errors import ReplayDivergence, SnapshotDecodeError, SubsetSyntaxError
from .session import Session, SessionError, SessionState, format_error
from .snapshot import (
    TRUST_SIGNED,
    capture,
    decode_snapshot,
    encode_snapshot,
    replay_to,
)
from .stepper import Done, Failed, NeedInput, Paused, StepEvent


class FileEntry(BaseModel):
    n: str
    c: str


class LoadFilesMsg(BaseModel):
    id: Union[int, str]
    op: Literal["load_files"]
    files: list[FileEntry]


class FileUploadMsg(BaseModel):
    id: Union[int, str]
    op: Literal["file_upload"]
    n: str
    c: str


class ReplMsg(BaseModel):
    id: Union[int, str]
    op: Literal["repl"]
    input: str


class StepMsg(BaseModel):
    id: Union[int, str]
    op: Literal["step"]
    n: int = 1


class AnimateMsg(BaseModel):
    id: Union[int, str]
    op: Literal["animate"]
    ms: int = 0


class RunMsg(BaseModel):
    id: Union[int, str]
    op: Literal["run"]


class StopMsg(BaseModel):
    id: Union[int, str]
    op: Literal["stop"]


class ResetMsg(BaseModel):
    id: Union[int, str]
    op: Literal["reset"]


class MouseStateMsg(BaseModel):
    id: Union[int, str]
    op: Literal["mouse_state"]
    x: int = 0
    y: int = 0
    button: int = 0
    shift: bool = False
    ctrl: bool = False
    alt: bool = False


class InputLineMsg(BaseModel):
    id: Union[int, str]
    op: Literal["input_line"]
    text: str


class SnapshotMsg(BaseModel):
    id: Union[int, str]
    op: Literal["snapshot"]
    base: str = ""
    signed: bool = True


class RestoreMsg(BaseModel):
    id: Union[int, str]
    op: Literal["restore"]
    url: str


ClientMessage = Union[
    LoadFilesMsg,
    FileUploadMsg,
    ReplMsg,
    StepMsg,
    AnimateMsg,
    RunMsg,
    StopMsg,
    ResetMsg,
    MouseStateMsg,
    InputLineMsg,
    SnapshotMsg,
    RestoreMsg,
]

_MESSAGE_ADAPTER = TypeAdapter(ClientMessage)


def parse_message(data: dict):
    return _MESSAGE_ADAPTER.validate_python(data)


def span_payload(span):
    if span is None:
        return None
    return {
        "file": span.file_id,
        "sl": span.start_line,
        "sc": span.start_col,
        "el": span.end_line,
        "ec": span.end_col,
    }


def step_event_payload(event: StepEvent):
    assign = None
    if event.assign_target is not None:
        assign = {"target": event.assign_target, "value": event.assign_value}
    return {
        "ev": "step",
        "count": event.step_number,
        "file": event.span.file_id,
        "span": span_payload(event.span),
        "kind": event.kind,
        "scopes": [[[name, text] for name, text in scope] for scope in event.bubble],
        "assign": assign,
    }


class _Channel:
    """Playground sink buffering pixel/turtle traffic between pauses."""

    def __init__(self, controller):
        self.controller = controller
        self.pixels = []
        self.turtle_cmds = []

    def screen(self, w, h):
        self.flush()
        self.controller._emit({"ev": "screen", "w": w, "h": h})

    def pixel(self, x, y, color):
        self.pixels.append([x, y, color])

    def turtle(self, cmd):
        self.turtle_cmds.append(cmd)

    def flush(self):
        if self.pixels:
            self.controller._emit({"ev": "pixels", "batch": self.pixels})
            self.pixels = []
        if self.turtle_cmds:
            self.controller._emit({"ev": "turtle", "commands": self.turtle_cmds})
            self.turtle_cmds = []


class SessionController:
    """Owns one session; processes messages in order, emitting events."""

    def __init__(self, emit, *, seed=0, key=None, max_steps=None, time_fn=None):
        self.emit = emit
        self.key = key
        self.seed = seed
        self.max_steps = max_steps
        self.time_fn = time_fn
        self.current_id = None
        self._sleep = None  # test hook for animate pacing
        self._fresh_session(SessionState(seed=seed))

    def _fresh_session(self, state):
        self.channel = _Channel(self)
        self.session = Session(
            state,
            stdout=self._stdout,
            channel=self.channel,
            max_steps=self.max_steps,
            time_fn=self.time_fn,
        )

    @property
    def engine(self):
        return self.session.engine

    # -- emission ------------------------------------------------------------

    def _emit(self, payload):
        payload = dict(payload)
        if self.current_id is not None:
            payload["id"] = self.current_id
        self.emit(payload)

    def _stdout(self, text):
        self._emit({"ev": "stdout", "text": text})

    def _emit_state(self):
        self._emit(
            {
                "ev": "state",
                "files": [{"n": n, "c": c} for n, c in self.session.state.files],
                "repl_history": list(self.session.state.repl_history),
            }
        )

    def _emit_error(self, type_name, message, span=None, traceback=None):
        self._emit(
            {
                "ev": "error",
                "type": type_name,
                "message": message,
                "span": span_payload(span),
                "traceback": [
                    {"file": f, "line": ln, "where": w} for f, ln, w in (traceback or [])
                ],
            }
        )

    # -- outcome reporting ------------------------------------------------------

    def _report(self, outcome):
        self.channel.flush()
        if isinstance(outcome, Paused):
            self._emit(step_event_payload(outcome.event))
        elif isinstance(outcome, Done):
            self._emit({"ev": "done", "steps": self.engine.step_count})
        elif isinstance(outcome, Failed):
            type_name, message, tb = format_error(outcome)
            self._emit_error(type_name, message, traceback=tb)
        elif isinstance(outcome, NeedInput) or self.engine.status == "awaiting_input":
            prompt = self.engine.need_input.prompt if self.engine.need_input else ""
            self._emit({"ev": "need_input", "prompt": prompt})

    def _ensure_loaded(self):
        if self.engine.status in ("idle", "done", "failed"):
            self.session.load_main()

    # -- dispatch ------------------------------------------------------------------

    def handle(self, data: dict):
        try:
            msg = parse_message(data)
        except ValidationError as e:
            self.current_id = data.get("id") if isinstance(data, dict) else None
            op = data.get("op") if isinstance(data, dict) else None
            known = {"load_files", "file_upload", "repl", "step", "animate", "run",
                     "stop", "reset", "mouse_state", "input_line", "snapshot", "restore"}
            if op not in known:
                self._emit_error("protocol", f"unknown op: {op!r}")
            else:
                self._emit_error("protocol", f"malformed {op} message: {e.error_count()} invalid field(s)")
            self.current_id = None
            return
        self.current_id = msg.id
        try:
            getattr(self, "_op_" + msg.op)(msg)
        except SessionError as e:
            self._emit_error("session", str(e))
        except SubsetSyntaxError as e:
            self._emit_error("SyntaxError", e.message, span=e.span)
        finally:
            self.current_id = None

    # -- operations -------------------------------------------------------------------

    def _op_load_files(self, msg):
        self.session.state.files = [(f.n, f.c) for f in msg.files]
        self._emit_state()

    def _op_file_upload(self, msg):
        self.session.state.write_file(msg.n, msg.c)
        self._emit_state()

    def _op_repl(self, msg):
        result = self.session.repl_eval(msg.input)
        self.channel.flush()
        if result.kind == "error":
            type_name, message, span, tb = result.error
            self._emit_error(type_name, message, span=span, traceback=tb)
        elif result.kind == "paused":
            self._report(result.outcome)
        elif self.engine.status == "awaiting_input":
            self._report(None)
        else:
            self._emit({"ev": "result", "repr": result.display})

    def _op_step(self, msg):
        self._ensure_loaded()
        if self.engine.status == "awaiting_input":
            self._report(None)
            return
        outcome = self.engine.step(msg.n)
        self._finish_drive(outcome)

    def _op_run(self, msg):
        self._ensure_loaded()
        if self.engine.status == "awaiting_input":
            self._report(None)
            return
        outcome = self.engine.run()
        self._finish_drive(outcome)

    def _op_animate(self, msg):
        self._ensure_loaded()
        if self.engine.status == "awaiting_input":
            self._report(None)
            return

        def on_event(event):
            self.channel.flush()
            self._emit(step_event_payload(event))

        outcome = self.engine.animate(msg.ms, on_event, sleep=self._sleep)
        if not isinstance(outcome, Paused):
            self._finish_drive(outcome)

    def _finish_drive(self, outcome):
        if self.engine.status == "awaiting_input":
            self._report(None)
            return
        if self.session.run_source == "repl" and not isinstance(outcome, Paused):
            result = self.session.continue_repl(outcome)
            self.channel.flush()
            if result.kind == "error":
                type_name, message, span, tb = result.error
                self._emit_error(type_name, message, span=span, traceback=tb)
            else:
                self._emit({"ev": "result", "repr": result.display})
            return
        self._report(outcome if outcome is not None else self.engine.last_outcome)

    def _op_stop(self, msg):
        self.engine.request_stop()
        self._emit({"ev": "ok", "op": "stop"})

    def _op_reset(self, msg):
        state = self.session.state
        self._fresh_session(state)
        self._emit_state()

    def _op_mouse_state(self, msg):
        self.engine.mouse_state = (msg.x, msg.y, msg.button, msg.shift, msg.ctrl, msg.alt)
        self._emit({"ev": "ok", "op": "mouse_state"})

    def _op_input_line(self, msg):
        if self.engine.status != "awaiting_input":
            self._emit_error("protocol", "engine is not awaiting input")
            return
        self.engine.provide_input(msg.text)
        outcome = self.engine.resume()
        self._finish_drive(outcome)

    def _op_snapshot(self, msg):
        state = capture(self.session)
        key = self.key if msg.signed else None
        if msg.signed and not self.key:
            self._emit_error("snapshot", "no signing key configured; pass signed=false")
            return
        link = encode_snapshot(state, key=key, base=msg.base)
        self._emit({"ev": "snapshot", "url": link.url, "oversize": link.oversize})

    def _op_restore(self, msg):
        try:
            state, trust = decode_snapshot(msg.url, key=self.key)
        except SnapshotDecodeError as e:
            self._emit_error("snapshot", str(e))
            return
        if trust == TRUST_SIGNED and state.executing and state.steps:
            try:
                from .snapshot import replay_to

                session = replay_to(
                    state,
                    stdout=self._stdout,
                    channel=self.channel,
                    max_steps=self.max_steps,
                    time_fn=self.time_fn,
                )
            except ReplayDivergence as e:
                self._emit_error("snapshot", str(e))
                return
            self.channel.flush()
            self.session = session
            self._emit_state()
            self._emit({"ev": "trust", "trust": trust})
            if session.engine.last_event is not None:
                self._emit(step_event_payload(session.engine.last_event))
            return
        fresh = SessionState(
            files=list(state.files),
            repl_history=list(state.repl_history),
            seed=state.seed,
        )
        self._fresh_session(fresh)
        self._emit_state()
        self._emit({"ev": "trust", "trust": trust})
