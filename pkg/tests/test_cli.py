"""CLI entry points: run exit codes, tracing, debugger script, snapshot tools."""

import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "stepboot.cli"]


def run_cli(*args, input_text=None, env=None, timeout=60):
    return subprocess.run(
        CLI + list(args),
        input=input_text,
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
    )


@pytest.fixture()
def program(tmp_path):
    def write(source, name="main.py"):
        path = tmp_path / name
        path.write_text(source)
        return str(path)

    return write


def test_run_success_exit_zero(program):
    proc = run_cli("run", program("print(1+1)\n"))
    assert proc.returncode == 0
    assert proc.stdout == "2\n"


def test_run_uncaught_exception_exit_one(program):
    proc = run_cli("run", program("1/0\n"))
    assert proc.returncode == 1
    assert "ZeroDivisionError: division by zero" in proc.stderr
    assert proc.stdout == ""


def test_run_syntax_error_exit_two(program):
    proc = run_cli("run", program("x = [i for i in y]\n"))
    assert proc.returncode == 2
    assert "list-comprehensions" in proc.stderr


def test_run_trace_single_pass(program):
    proc = run_cli("run", "--trace", program("pass\n"))
    assert proc.returncode == 0
    lines = [l for l in proc.stderr.splitlines() if l.startswith("step ")]
    assert len(lines) == 1
    assert lines[0].startswith("step 1 main.py:1:0-1:4 StmtDone")


def test_trace_stdout_identical_to_untraced(program):
    source = "for i in range(5):\n    print(i * i)\n"
    plain = run_cli("run", program(source))
    traced = run_cli("run", "--trace", program(source))
    assert plain.stdout == traced.stdout
    assert plain.returncode == traced.returncode == 0
    assert "step " in traced.stderr and "step " not in plain.stderr


def test_run_reads_stdin_for_input(program):
    proc = run_cli(
        "run", program("name = input('? ')\nprint('hi', name)\n"), input_text="eve\n"
    )
    assert proc.returncode == 0
    assert proc.stdout == "? hi eve\n"


def test_run_max_steps(program):
    proc = run_cli(
        "run", "--max-steps", "50", program("i = 0\nwhile True:\n    i += 1\n")
    )
    assert proc.returncode == 1
    assert "step limit" in proc.stderr


def test_run_with_workspace_imports(program, tmp_path):
    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    (ws / "files" / "helper.py").write_text("def triple(x):\n    return x * 3\n")
    main = program("import helper\nprint(helper.triple(5))\n")
    proc = run_cli("run", "--workspace", str(ws), main)
    assert proc.returncode == 0
    assert proc.stdout == "15\n"


def test_debug_scripted_session(program):
    script = "s\ns 2\np x\nw\nc\nq\n"
    proc = run_cli("debug", program("x = 1+2*3\ny = x + 1\n"), input_text=script)
    assert proc.returncode == 0
    assert "step 1 [ExprEnd] '2*3'" in proc.stdout
    assert "x: 7" in proc.stdout
    assert "done in" in proc.stdout


def test_debug_unbound_name(program):
    proc = run_cli("debug", program("x = 1\n"), input_text="p zzz\nq\n")
    assert "zzz: not bound" in proc.stdout


def test_snapshot_encode_decode_roundtrip(tmp_path, program):
    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    (ws / "files" / "main.py").write_text("print('snap')\n")
    (ws / "repl_history.txt").write_text("1+1\n")

    enc = run_cli("snapshot", "encode", "--workspace", str(ws), "--key", "sk",
                  "--base", "https://s/")
    assert enc.returncode == 0
    url = enc.stdout.strip()
    assert url.startswith("https://s/#state=") and "&sig=" in url

    out = tmp_path / "restored"
    dec = run_cli("snapshot", "decode", url, "--key", "sk", "--out", str(out))
    assert dec.returncode == 0
    assert (out / "files" / "main.py").read_text() == "print('snap')\n"
    assert (out / "repl_history.txt").read_text() == "1+1\n"


def test_snapshot_encode_requires_key_or_unsigned(tmp_path):
    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    proc = run_cli("snapshot", "encode", "--workspace", str(ws))
    assert proc.returncode == 2
    assert "--key" in proc.stderr
    ok = run_cli("snapshot", "encode", "--workspace", str(ws), "--unsigned")
    assert ok.returncode == 0


def test_snapshot_decode_wrong_key(tmp_path):
    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    (ws / "files" / "a.py").write_text("x=1")
    enc = run_cli("snapshot", "encode", "--workspace", str(ws), "--key", "right")
    url = enc.stdout.strip()

    bad = run_cli("snapshot", "decode", url, "--key", "wrong",
                  "--out", str(tmp_path / "o1"))
    assert bad.returncode == 1
    assert "invalid signature" in bad.stderr
    assert not (tmp_path / "o1" / "files" / "a.py").exists()

    forced = run_cli("snapshot", "decode", url, "--key", "wrong", "--force-load",
                     "--out", str(tmp_path / "o2"))
    assert forced.returncode == 0
    assert (tmp_path / "o2" / "files" / "a.py").read_text() == "x=1"


def test_snapshot_oversize_warning(tmp_path):
    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    (ws / "files" / "big.py").write_text("x = 1\n" * 3000)
    proc = run_cli("snapshot", "encode", "--workspace", str(ws), "--unsigned")
    assert proc.returncode == 0
    assert proc.stdout.strip().startswith("#state=")
    assert "warning" in proc.stderr and "8000" in proc.stderr


def test_snapshot_key_from_environment(tmp_path):
    import os

    ws = tmp_path / "ws"
    (ws / "files").mkdir(parents=True)
    env = dict(os.environ)
    env["STEPBOOT_KEY"] = "env-key"
    proc = run_cli("snapshot", "encode", "--workspace", str(ws), env=env)
    assert proc.returncode == 0
    assert "&sig=" in proc.stdout


def test_serve_occupied_port_exit_three():
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
        proc = run_cli("serve", "--port", str(port))
        assert proc.returncode == 3
        assert "in use" in proc.stderr


def test_repl_command_scripted():
    script = "1+1\nx = 5\nx * 2\ndef f(n):\n    return n + 1\n\nf(10)\n"
    proc = run_cli("repl", input_text=script)
    assert proc.returncode == 0
    # piped stdin leaves prompts and results on shared lines; strip the prompts
    cleaned = [
        l.replace(">>> ", "").replace("... ", "").strip()
        for l in proc.stdout.splitlines()
    ]
    values = [l for l in cleaned if l]
    assert values == ["2", "10", "11"]


def test_repl_command_survives_errors():
    proc = run_cli("repl", input_text="1/0\n2+2\n")
    assert proc.returncode == 0
    assert "ZeroDivisionError" in proc.stderr
    assert "4" in proc.stdout
