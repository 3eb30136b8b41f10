"""Sessions: virtual file store, REPL, import resolution, run control.

A session owns one engine and one global namespace shared by main-file runs
and REPL entries (imported session files get their own namespaces). File
contents live in the session; the CLI persists them under a workspace
directory, the web client in browser storage.
"""

from __future__ import annotations

import os

from .compiler import compile_module, compile_node
from .errors import SubsetSyntaxError
from .objects import MPInstance, MPModule, exc_message, exc_new, EXC_IMPORT_ERROR
from .parser import parse_source
from .runtime import (
    make_builtins,
    make_module_rte,
    resolve_module,
    sem_repr,
)
from .stepper import Done, Engine, Failed, Paused, StepContext

_FORBIDDEN_NAME_CHARS = ("/", "\\", "\0")


class SessionError(Exception):
    """File-store misuse: duplicate names, unknown files, bad names."""


class SessionState:
    """Persistent part of a session: files, REPL history, seed, run point."""

    def __init__(self, files=None, repl_history=None, seed=0):
        self.files = list(files or [])  # ordered (name, content); files[0] is active
        self.repl_history = list(repl_history or [])
        self.seed = seed
        self.steps = None  # step counter of the captured run, or None
        self.executing = False

    # -- file operations --------------------------------------------------

    def _check_name(self, name):
        if not name or any(c in name for c in _FORBIDDEN_NAME_CHARS):
            raise SessionError(f"invalid file name: {name!r}")

    def _index(self, name):
        for i, (n, _) in enumerate(self.files):
            if n == name:
                return i
        return -1

    def create_file(self, name, content=""):
        self._check_name(name)
        if self._index(name) >= 0:
            raise SessionError(f"file already exists: {name!r}")
        self.files.append((name, content))

    def write_file(self, name, content):
        i = self._index(name)
        if i < 0:
            self.create_file(name, content)
        else:
            self.files[i] = (name, content)

    def read_file(self, name):
        i = self._index(name)
        if i < 0:
            raise SessionError(f"no such file: {name!r}")
        return self.files[i][1]

    def rename_file(self, old, new):
        self._check_name(new)
        if self._index(new) >= 0:
            raise SessionError(f"file already exists: {new!r}")
        i = self._index(old)
        if i < 0:
            raise SessionError(f"no such file: {old!r}")
        self.files[i] = (new, self.files[i][1])

    def delete_file(self, name):
        i = self._index(name)
        if i < 0:
            raise SessionError(f"no such file: {name!r}")
        del self.files[i]

    def select_file(self, name):
        """Make `name` the active (front) file."""
        i = self._index(name)
        if i < 0:
            raise SessionError(f"no such file: {name!r}")
        self.files.insert(0, self.files.pop(i))

    def file_names(self):
        return [n for n, _ in self.files]

    # -- workspace persistence ---------------------------------------------

    def save_workspace(self, directory):
        files_dir = os.path.join(directory, "files")
        os.makedirs(files_dir, exist_ok=True)
        keep = set()
        for name, content in self.files:
            keep.add(name)
            with open(os.path.join(files_dir, name), "w", encoding="utf-8") as f:
                f.write(content)
        for existing in os.listdir(files_dir):
            if existing not in keep:
                os.remove(os.path.join(files_dir, existing))
        history_path = os.path.join(directory, "repl_history.txt")
        with open(history_path, "w", encoding="utf-8") as f:
            for entry in self.repl_history:
                f.write(entry.replace("\\", "\\\\").replace("\n", "\\n") + "\n")

    @classmethod
    def load_workspace(cls, directory):
        state = cls()
        files_dir = os.path.join(directory, "files")
        if os.path.isdir(files_dir):
            for name in sorted(os.listdir(files_dir)):
                with open(os.path.join(files_dir, name), encoding="utf-8") as f:
                    state.files.append((name, f.read()))
        history_path = os.path.join(directory, "repl_history.txt")
        if os.path.isfile(history_path):
            with open(history_path, encoding="utf-8") as f:
                for line in f.read().splitlines():
                    state.repl_history.append(_unescape_entry(line))
        return state


def _unescape_entry(line):
    out = []
    i = 0
    while i < len(line):
        c = line[i]
        if c == "\\" and i + 1 < len(line):
            nxt = line[i + 1]
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(c)
        i += 1
    return "".join(out)


def repl_needs_more(text):
    """True when a REPL entry is incomplete (open block or brackets)."""
    depth = 0
    in_string = None
    escaped = False
    for ch in text:
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == in_string:
                in_string = None
            continue
        if ch in "\"'":
            in_string = ch
        elif ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(0, depth - 1)
    if depth > 0:
        return True
    stripped = text.rstrip()
    if not stripped:
        return False
    if stripped.splitlines()[-1].rstrip().endswith(":"):
        return True
    if "\n" in text:
        # inside a block: a blank final line terminates it
        return not text.endswith("\n\n") and stripped.splitlines()[-1][:1] in (" ", "\t")
    return False


class ReplResult:
    """Outcome of one REPL entry."""

    def __init__(self, kind, display=None, error=None, outcome=None):
        self.kind = kind  # "value" | "none" | "error" | "paused"
        self.display = display
        self.error = error  # (type_name, message, span, traceback)
        self.outcome = outcome


class Session:
    def __init__(
        self,
        state=None,
        *,
        stdout=None,
        input_provider=None,
        channel=None,
        seed=None,
        depth_limit=10000,
        max_steps=None,
        time_fn=None,
    ):
        self.state = state if state is not None else SessionState()
        if seed is not None:
            self.state.seed = seed
        self.output_chunks = []

        def sink(text):
            self.output_chunks.append(text)
            if stdout is not None:
                stdout(text)

        self.engine = Engine(
            stdout=sink,
            input_provider=input_provider,
            channel=channel,
            seed=self.state.seed,
            depth_limit=depth_limit,
            max_steps=max_steps,
            time_fn=time_fn,
        )
        self.engine.builtins = make_builtins(playground=channel is not None)
        self.engine.importer = self._import
        self.globals = {}
        self.module_cache = {}
        self.run_source = None  # "file" | "repl" | None
        self.repl_display = None  # display text of the last completed entry
        self._repl_holder = []

    # -- output ----------------------------------------------------------------

    def output(self):
        return "".join(self.output_chunks)

    # -- imports -----------------------------------------------------------------

    def _import(self, rte, name, cont, span):
        cached = self.module_cache.get(name)
        if cached is not None:
            return (cont, rte, cached)
        module = resolve_module(name)
        if module is not None:
            self.module_cache[name] = module
            return (cont, rte, module)
        try:
            source = self.state.read_file(name + ".py")
        except SessionError:
            exc = exc_new(EXC_IMPORT_ERROR, f"No module named '{name}'")
            return (rte.handler, rte, exc)
        try:
            _cte, code = compile_module(parse_source(source, name + ".py"))
        except SubsetSyntaxError as e:
            exc = exc_new(EXC_IMPORT_ERROR, f"syntax error in module '{name}': {e}")
            return (rte.handler, rte, exc)
        namespace = {}
        module = MPModule(name, namespace)
        self.module_cache[name] = module  # pre-registered for cyclic imports
        mod_rte = make_module_rte(self.engine, namespace, module_name=name)
        mod_rte.handler = rte.handler
        mod_rte.depth = rte.depth
        mod_rte.tb = (rte.tb, f"<module {name}>", span)

        def finish(_rte, _v):
            return (cont, rte, module)

        return (code, mod_rte, finish)

    # -- main runs ------------------------------------------------------------------

    def load_main(self):
        """Compile the active file and arm the engine (step counter reset)."""
        if not self.state.files:
            raise SessionError("no files in session")
        name, source = self.state.files[0]
        module = parse_source(source, name)
        _cte, code = compile_module(module)
        rte = make_module_rte(self.engine, self.globals)
        self.engine.reset_counter()
        self.engine.load(code, rte, _final_cont)
        self.run_source = "file"
        return self.engine

    def run_main(self):
        self.load_main()
        return self.engine.run()

    # -- REPL --------------------------------------------------------------------------

    def repl_eval(self, text, mode="run", n=1):
        """Evaluate one REPL entry; stepping modes pause like a main run."""
        self.state.repl_history.append(text)
        self.repl_display = None
        try:
            module = parse_source(text, "<repl>")
            cte, code = compile_module(module)
        except SubsetSyntaxError as e:
            return ReplResult("error", error=("SyntaxError", e.message, e.span, []))
        is_expr = len(module.body) == 1 and module.body[0].kind == "ExprStmt"
        if is_expr:
            _cte, code = compile_node(cte, module.body[0].value)
        rte = make_module_rte(self.engine, self.globals)
        holder = []
        self._repl_holder = holder

        def finish(rte2, value):
            if is_expr and value is not None:

                def with_repr(_rte, text_repr):
                    holder.append(text_repr)
                    return Done(value)

                return sem_repr(value, StepContext(rte2, with_repr, None))
            return Done(value)

        saved = self._save_run_state() if self.engine.status == "paused" else None
        self.engine.reset_counter()
        self.engine.load(code, rte, finish)
        if saved is None:
            self.run_source = "repl"
        if mode == "step" and saved is None:
            outcome = self.engine.step(n)
        else:
            # inspection entries beside a paused run always run to completion
            outcome = self.engine.run()
        if saved is not None:
            if self.engine.status == "awaiting_input":
                self.engine.need_input = None
                result = ReplResult(
                    "error",
                    error=(
                        "RuntimeError",
                        "input() is not available while the main program is paused",
                        None,
                        [],
                    ),
                )
            else:
                result = self._finish_repl(outcome, holder)
            self._restore_run_state(saved)
            return result
        return self._finish_repl(outcome, holder)

    def _save_run_state(self):
        """Freeze a paused run so a REPL inspection entry can execute beside it."""
        engine = self.engine
        return (
            engine.pending,
            engine.step_count,
            engine.pause_at,
            engine.status,
            engine.last_event,
            engine.last_outcome,
            engine.current_rte,
            self.run_source,
        )

    def _restore_run_state(self, saved):
        engine = self.engine
        (
            engine.pending,
            engine.step_count,
            engine.pause_at,
            engine.status,
            engine.last_event,
            engine.last_outcome,
            engine.current_rte,
            self.run_source,
        ) = saved

    def continue_repl(self, outcome):
        return self._finish_repl(outcome, self._repl_holder)

    def _finish_repl(self, outcome, holder):
        if isinstance(outcome, Paused):
            return ReplResult("paused", outcome=outcome)
        if isinstance(outcome, Failed):
            type_name, message, tb = format_error(outcome)
            return ReplResult(
                "error", error=(type_name, message, None, tb), outcome=outcome
            )
        display = holder[0] if holder else None
        self.repl_display = display
        if display is not None:
            return ReplResult("value", display=display, outcome=outcome)
        return ReplResult("none", outcome=outcome)

    # -- snapshot support ----------------------------------------------------------------

    def capture_steps(self):
        """(steps, executing) for a snapshot: only main-file runs replay."""
        if self.run_source == "file" and self.engine.status == "paused":
            return self.engine.snapshot_exec_state(), True
        return None, False


def _final_cont(_rte, value):
    return Done(value)


def format_error(outcome):
    """(type_name, message, spans) for a Failed outcome."""
    exc = outcome.exc
    if isinstance(exc, MPInstance):
        return (exc.cls.name, exc_message(exc), exc.tb or [])
    return (type(exc).__name__, str(exc), [])
