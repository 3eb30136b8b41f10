"""CPS trampoline and stepping engine.

Compiled code values and continuations never call each other on the native
stack: they return "bounce" triples (fn, a, b) that the trampoline invokes,
so native call depth stays constant regardless of loop counts or interpreted
recursion depth. Step hooks fire after every basic operation; in run mode
they only advance the counter, in stepping modes they surface a Paused
outcome carrying the step event and the resumption.
"""

from __future__ import annotations

import random

from .errors import StepLimitExceeded
from .objects import UNBOUND, safe_repr

INF = float("inf")

EXPR_END = "ExprEnd"
STMT_DONE = "StmtDone"
ASSIGN_DONE = "AssignDone"


class Done:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __repr__(self):
        return f"Done({self.value!r})"


class Failed:
    __slots__ = ("exc", "traceback")

    def __init__(self, exc, traceback):
        self.exc = exc
        self.traceback = traceback  # list of (file_id, line, where)

    def __repr__(self):
        return f"Failed({self.exc!r})"


class Paused:
    __slots__ = ("event", "resume")

    def __init__(self, event, resume):
        self.event = event
        self.resume = resume  # bounce triple

    def __repr__(self):
        return f"Paused(step {self.event.step_number})"


class NeedInput:
    __slots__ = ("prompt", "resume")

    def __init__(self, prompt, resume):
        self.prompt = prompt
        self.resume = resume  # fn(text) -> bounce triple


class StepEvent:
    __slots__ = ("step_number", "span", "kind", "bubble", "assign_target", "assign_value")

    def __init__(self, step_number, span, kind, bubble, assign_target=None, assign_value=None):
        self.step_number = step_number
        self.span = span
        self.kind = kind
        self.bubble = bubble  # scopes innermost first: [[(name, display), ...], ...]
        self.assign_target = assign_target
        self.assign_value = assign_value

    def __repr__(self):
        return f"StepEvent({self.step_number}, {self.kind}, {self.span})"


class RTE:
    """Run-time environment: one per activation, derived per construct."""

    __slots__ = (
        "engine",
        "globals",
        "module_name",
        "frame",
        "cells",
        "local_table",
        "free_names",
        "class_ns",
        "handler",
        "break_k",
        "continue_k",
        "return_k",
        "exc_current",
        "depth",
        "tb",
    )

    def __init__(self, engine, globals_, module_name="__main__"):
        self.engine = engine
        self.globals = globals_
        self.module_name = module_name
        self.frame = None
        self.cells = ()
        self.local_table = ()
        self.free_names = ()
        self.class_ns = None
        self.handler = None
        self.break_k = None
        self.continue_k = None
        self.return_k = None
        self.exc_current = None
        self.depth = 0
        self.tb = None  # chain: (parent_tb, where, line)

    def fork(self):
        new = RTE.__new__(RTE)
        new.engine = self.engine
        new.globals = self.globals
        new.module_name = self.module_name
        new.frame = self.frame
        new.cells = self.cells
        new.local_table = self.local_table
        new.free_names = self.free_names
        new.class_ns = self.class_ns
        new.handler = self.handler
        new.break_k = self.break_k
        new.continue_k = self.continue_k
        new.return_k = self.return_k
        new.exc_current = self.exc_current
        new.depth = self.depth
        new.tb = self.tb
        return new


class StepContext:
    """(env, continuation, span) bundle handed to object-model operations."""

    __slots__ = ("rte", "cont", "span")

    def __init__(self, rte, cont, span):
        self.rte = rte
        self.cont = cont
        self.span = span


def bubble_scopes(rte):
    """Scope list for the environment bubble, innermost scope first."""
    scopes = []
    if rte.class_ns is not None:
        scopes.append([(k, safe_repr(v)) for k, v in rte.class_ns.items()])
    if rte.frame is not None:
        scope = []
        frame = rte.frame
        for name, slot, is_cell in rte.local_table:
            v = frame[slot]
            if is_cell:
                v = v.v
            if v is not UNBOUND:
                scope.append((name, safe_repr(v)))
        scopes.append(scope)
        if rte.free_names:
            captured = []
            for name, cell in zip(rte.free_names, rte.cells):
                if cell.v is not UNBOUND:
                    captured.append((name, safe_repr(cell.v)))
            scopes.append(captured)
    scopes.append([(k, safe_repr(v)) for k, v in rte.globals.items()])
    return scopes


def note_step(rte, kind, span, cont, value, target=None, assigned=None):
    """Count one step; pause when the engine's mode or a stop request says so.

    `assigned` is the raw value bound by an AssignDone step; its display text
    is only rendered when the event materializes.
    """
    eng = rte.engine
    n = eng.step_count + 1
    eng.step_count = n
    if n > eng.limit_at:
        raise StepLimitExceeded(eng.max_steps)
    if n < eng.pause_at and not eng.stop_requested:
        return (cont, rte, value)
    display = safe_repr(assigned) if target is not None else None
    event = StepEvent(n, span, kind, bubble_scopes(rte), target, display)
    return Paused(event, (cont, rte, value))


def do_expr_end(cont, span):
    """Continuation that emits the expression-end step, then resumes cont."""

    def expr_end(rte, value):
        return note_step(rte, EXPR_END, span, cont, value)

    return expr_end


class Engine:
    """Drives bounces to a terminal outcome under step / animate / run modes."""

    def __init__(
        self,
        *,
        stdout=None,
        input_provider=None,
        channel=None,
        seed=0,
        depth_limit=10000,
        max_steps=None,
        time_fn=None,
    ):
        self.step_count = 0
        self.pause_at = INF
        self.max_steps = max_steps
        self.limit_at = INF if max_steps is None else max_steps
        self.stop_requested = False
        self.stdout = stdout if stdout is not None else (lambda text: None)
        self.input_provider = input_provider
        self.channel = channel
        self.rng = random.Random(seed)
        self.seed = seed
        self.depth_limit = depth_limit
        self.time_fn = time_fn
        self.builtins = {}  # name table, installed by the session
        self.mouse_state = (0, 0, 0, False, False, False)
        self.screen = None  # (w, h) after setScreenMode
        self.turtle_state = {"x": 0.0, "y": 0.0, "heading": 0.0, "pen": True, "speed": 3}
        self.importer = None
        self.status = "idle"  # idle|loaded|paused|awaiting_input|done|failed
        self.pending = None  # bounce triple when loaded/paused
        self.need_input = None  # NeedInput when awaiting_input
        self.last_event = None
        self.last_outcome = None
        self.current_rte = None
        self.stopped = False  # last pause came from a stop request

    # -- program lifecycle -------------------------------------------------

    def load(self, code, rte, final_cont):
        """Arm a compiled program without running it (step counter untouched)."""
        self.pending = (code, rte, final_cont)
        self.status = "loaded"
        return self

    def reset_counter(self):
        self.step_count = 0
        self.last_event = None

    # -- drive modes ---------------------------------------------------------

    def run(self):
        self.pause_at = INF
        return self._drive()

    def step(self, n=1):
        self.pause_at = self.step_count + n
        return self._drive()

    def resume(self):
        """Continue toward the current pause target (e.g. after input)."""
        return self._drive()

    def animate(self, interval_ms, on_event, sleep=None):
        """Pause after every step, reporting each event, until terminal."""
        import time as _time

        sleep = sleep if sleep is not None else _time.sleep
        while True:
            outcome = self.step(1)
            if not isinstance(outcome, Paused):
                return outcome
            on_event(outcome.event)
            if self.stopped:
                return outcome
            if interval_ms:
                sleep(interval_ms / 1000.0)

    def request_stop(self):
        self.stop_requested = True

    def provide_input(self, text):
        if self.status != "awaiting_input":
            raise RuntimeError("engine is not awaiting input")
        self.pending = self.need_input.resume(text)
        self.need_input = None
        self.status = "paused"

    def snapshot_exec_state(self):
        """Current step counter, for embedding in snapshots."""
        return self.step_count

    # -- trampoline ----------------------------------------------------------

    def _drive(self):
        item = self.pending
        if item is None:
            return self.last_outcome
        self.pending = None
        try:
            while True:
                while type(item) is tuple:
                    fn, a, b = item
                    item = fn(a, b)
                if type(item) is NeedInput:
                    if self.input_provider is not None:
                        line = self.input_provider(item.prompt)
                        item = item.resume(line)
                        continue
                    self.need_input = item
                    self.status = "awaiting_input"
                    break
                break
        except StepLimitExceeded as e:
            item = Failed(e, None)
            self.status = "failed"
            self.last_outcome = item
            return item
        if type(item) is Paused:
            self.status = "paused"
            self.pending = item.resume
            self.last_event = item.event
            self.current_rte = item.resume[1]
            if self.stop_requested:
                self.stop_requested = False
                self.stopped = True
            else:
                self.stopped = False
        elif type(item) is Done:
            self.status = "done"
        elif type(item) is Failed:
            self.status = "failed"
        self.last_outcome = item
        return item
