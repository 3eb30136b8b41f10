"""Command-line entry points: headless runs, an interactive terminal
debugger, snapshot tools, and the protocol server."""

from __future__ import annotations

import argparse
import os
import socket
import sys

from .errors import SnapshotDecodeError, SubsetSyntaxError
from .session import Session, SessionState, format_error, repl_needs_more
from .snapshot import (
    TRUST_INVALID,
    TRUST_SIGNED,
    decode_snapshot,
    encode_snapshot,
)
from .stepper import Done, Failed, Paused


def _stdin_provider(prompt):
    line = sys.stdin.readline()
    if line == "":
        return None
    return line.rstrip("\n")


def _load_session(path, workspace, seed, max_steps=None, trace_to=None):
    if workspace:
        state = SessionState.load_workspace(workspace)
    else:
        state = SessionState()
    with open(path, encoding="utf-8") as f:
        source = f.read()
    name = os.path.basename(path)
    state.write_file(name, source)
    state.select_file(name)
    return Session(
        state,
        seed=seed,
        max_steps=max_steps,
        input_provider=_stdin_provider,
        stdout=lambda text: (sys.stdout.write(text), sys.stdout.flush()),
    )


def _span_text(span):
    if span is None:
        return "?"
    return f"{span.start_line}:{span.start_col}-{span.end_line}:{span.end_col}"


def _bubble_summary(event, limit=60):
    scope = event.bubble[0] if event.bubble else []
    text = " ".join(f"{name}={value}" for name, value in scope)
    if len(text) > limit:
        text = text[: limit - 1] + "…"
    return text


def _trace_line(event):
    line = (
        f"step {event.step_number} {event.span.file_id}:{_span_text(event.span)} "
        f"{event.kind}"
    )
    if event.assign_target is not None:
        line += f" {event.assign_target}={event.assign_value}"
    summary = _bubble_summary(event)
    if summary:
        line += f" [{summary}]"
    return line


def _report_failure(outcome):
    type_name, message, tb = format_error(outcome)
    print("Traceback (most recent call last):", file=sys.stderr)
    for file_id, line, where in tb:
        loc = f'  File "{file_id}", line {line}'
        if where:
            loc += f", in {where}"
        print(loc, file=sys.stderr)
    print(f"{type_name}: {message}" if message else type_name, file=sys.stderr)


def cmd_run(args):
    try:
        session = _load_session(args.file, args.workspace, args.seed, args.max_steps)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        session.load_main()
    except SubsetSyntaxError as e:
        print(f"SyntaxError: {e}", file=sys.stderr)
        return 2
    if args.trace:
        outcome = session.engine.animate(
            0, lambda ev: print(_trace_line(ev), file=sys.stderr)
        )
    else:
        outcome = session.engine.run()
    if args.workspace:
        session.state.save_workspace(args.workspace)
    if isinstance(outcome, Done):
        return 0
    if isinstance(outcome, Failed):
        _report_failure(outcome)
        return 1
    return 0


DEBUG_HELP = """commands:
  s [n]    single step (n steps)
  a [ms]   animate: step repeatedly with a pause between steps
  c        continue to the end
  x        stop a pending animate/run at the next step
  p NAME   print the binding of NAME
  w        where: current span, step count, and bubble
  q        quit"""


def _print_event(event):
    print(f"step {event.step_number} [{event.kind}] {event.span.text()!r}")
    if event.assign_target is not None:
        print(f"  {event.assign_target} = {event.assign_value}")


def _lookup_binding(session, name):
    rte = session.engine.current_rte
    if rte is not None and rte.frame is not None:
        for var, slot, is_cell in rte.local_table:
            if var == name:
                v = rte.frame[slot]
                if is_cell:
                    v = v.v
                from .objects import UNBOUND, safe_repr

                return "not bound" if v is UNBOUND else safe_repr(v)
    from .objects import UNBOUND, safe_repr

    g = session.globals.get(name, UNBOUND)
    if g is UNBOUND:
        g = session.engine.builtins.get(name, UNBOUND)
    return "not bound" if g is UNBOUND else safe_repr(g)


def cmd_debug(args):
    try:
        session = _load_session(args.file, args.workspace, args.seed)
        session.load_main()
    except (OSError, SubsetSyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"loaded {os.path.basename(args.file)}; {DEBUG_HELP}")
    engine = session.engine
    while True:
        try:
            raw = input(f"[{engine.step_count}]> ").strip()
        except EOFError:
            return 0
        if not raw:
            continue
        parts = raw.split()
        cmd, rest = parts[0], parts[1:]
        if cmd == "q":
            return 0
        if cmd == "s":
            n = int(rest[0]) if rest else 1
            outcome = engine.step(n)
            _after_debug_step(session, outcome)
        elif cmd == "a":
            ms = int(rest[0]) if rest else 100
            outcome = engine.animate(ms, _print_event)
            if not isinstance(outcome, Paused):
                _after_debug_step(session, outcome)
        elif cmd == "c":
            outcome = engine.run()
            _after_debug_step(session, outcome)
        elif cmd == "x":
            engine.request_stop()
            print("stop requested")
        elif cmd == "p":
            if not rest:
                print("usage: p NAME")
                continue
            print(f"{rest[0]}: {_lookup_binding(session, rest[0])}")
        elif cmd == "w":
            ev = engine.last_event
            if ev is None:
                print("not started")
            else:
                _print_event(ev)
                for i, scope in enumerate(ev.bubble):
                    label = "locals" if i == 0 and len(ev.bubble) > 1 else "scope"
                    if i == len(ev.bubble) - 1:
                        label = "globals"
                    pairs = " ".join(f"{n}={v}" for n, v in scope) or "(no variables)"
                    print(f"  {label}: {pairs}")
        else:
            print(DEBUG_HELP)


def _after_debug_step(session, outcome):
    if isinstance(outcome, Paused):
        _print_event(outcome.event)
    elif isinstance(outcome, Done):
        print(f"done in {session.engine.step_count} steps")
    elif isinstance(outcome, Failed):
        _report_failure(outcome)


def _get_key(args):
    key = getattr(args, "key", None)
    if key is None:
        key = os.environ.get("STEPBOOT_KEY")
    return key


def cmd_snapshot(args):
    if args.action == "encode":
        key = _get_key(args)
        if not key and not args.unsigned:
            print(
                "error: snapshot encode requires --key (or STEPBOOT_KEY) or --unsigned",
                file=sys.stderr,
            )
            return 2
        state = SessionState.load_workspace(args.workspace or ".")
        link = encode_snapshot(state, key=None if args.unsigned else key, base=args.base)
        if link.oversize:
            print(
                f"warning: URL is {len(link.url)} bytes, over the {8000}-byte "
                "guideline for servers",
                file=sys.stderr,
            )
        print(link.url)
        return 0
    # decode
    key = _get_key(args)
    try:
        state, trust = decode_snapshot(args.url, key=key)
    except SnapshotDecodeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if trust == TRUST_INVALID and not args.force_load:
        print("error: invalid signature (use --force-load to extract anyway)", file=sys.stderr)
        return 1
    out = args.out or "."
    state.save_workspace(out)
    print(f"restored {len(state.files)} file(s) to {out} (trust: {trust})")
    if trust != TRUST_SIGNED:
        print("note: unsigned snapshot; not auto-executing", file=sys.stderr)
    return 0


def cmd_serve(args):
    import uvicorn

    from .server import create_app

    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        try:
            probe.bind((args.host, args.port))
        except OSError:
            print(f"error: port {args.port} is already in use", file=sys.stderr)
            return 3
    app = create_app(key=_get_key(args), seed=args.seed, webui_dir=args.webui_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except KeyboardInterrupt:
        pass
    return 0


def cmd_repl(args):
    """Interactive console against a fresh session (supports multi-line entry)."""
    session = Session(
        SessionState(),
        seed=args.seed,
        input_provider=_stdin_provider,
        stdout=lambda text: (sys.stdout.write(text), sys.stdout.flush()),
    )
    buffer = []
    while True:
        prompt = "... " if buffer else ">>> "
        try:
            line = input(prompt)
        except EOFError:
            print()
            return 0
        buffer.append(line)
        text = "\n".join(buffer)
        if repl_needs_more(text + ("\n" if line else "\n\n")):
            continue
        buffer = []
        if not text.strip():
            continue
        result = session.repl_eval(text)
        if result.kind == "value":
            print(result.display)
        elif result.kind == "error":
            type_name, message, _span, _tb = result.error
            print(f"{type_name}: {message}" if message else type_name, file=sys.stderr)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="stepboot",
        description="Single-stepping interpreter for a Python subset",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a program headlessly")
    p_run.add_argument("file")
    p_run.add_argument("--trace", action="store_true", help="print one line per step to stderr")
    p_run.add_argument("--max-steps", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--workspace", default=None)
    p_run.set_defaults(fn=cmd_run)

    p_debug = sub.add_parser("debug", help="interactive terminal debugger")
    p_debug.add_argument("file")
    p_debug.add_argument("--seed", type=int, default=0)
    p_debug.add_argument("--workspace", default=None)
    p_debug.set_defaults(fn=cmd_debug)

    p_repl = sub.add_parser("repl", help="interactive console")
    p_repl.add_argument("--seed", type=int, default=0)
    p_repl.set_defaults(fn=cmd_repl)

    p_snap = sub.add_parser("snapshot", help="encode/decode session snapshot URLs")
    snap_sub = p_snap.add_subparsers(dest="action", required=True)
    p_enc = snap_sub.add_parser("encode")
    p_enc.add_argument("--workspace", default=".")
    p_enc.add_argument("--key", default=None)
    p_enc.add_argument("--unsigned", action="store_true")
    p_enc.add_argument("--base", default="")
    p_enc.set_defaults(fn=cmd_snapshot)
    p_dec = snap_sub.add_parser("decode")
    p_dec.add_argument("url")
    p_dec.add_argument("--key", default=None)
    p_dec.add_argument("--out", default=None)
    p_dec.add_argument("--force-load", action="store_true")
    p_dec.set_defaults(fn=cmd_snapshot)

    p_serve = sub.add_parser("serve", help="serve the protocol over WebSocket")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8123)
    p_serve.add_argument("--webui-dir", default=None)
    p_serve.add_argument("--key", default=None)
    p_serve.add_argument("--seed", type=int, default=0)
    p_serve.set_defaults(fn=cmd_serve)

    p_stdio = sub.add_parser("serve-stdio", help="serve the protocol over stdio")
    p_stdio.add_argument("--key", default=None)
    p_stdio.add_argument("--seed", type=int, default=0)
    p_stdio.set_defaults(fn=lambda args: _cmd_stdio(args))

    args = parser.parse_args(argv)
    return args.fn(args)


def _cmd_stdio(args):
    from .server import serve_stdio

    serve_stdio(key=_get_key(args), seed=args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
