"""Stepping engine: modes, pause/resume transparency, stop, bubbles, limits,
and the constant-native-stack guarantee."""

import random
import threading
from pathlib import Path


from stepboot.errors import StepLimitExceeded
from stepboot.session import Session, SessionState
from stepboot.stepper import Done, Failed, Paused

CORPUS_DIR = Path(__file__).parent / "corpus"


def fresh(source, seed=0, **kwargs):
    session = Session(SessionState(files=[("main.py", source)]), seed=seed, **kwargs)
    session.load_main()
    return session


def full_run(source, seed=0):
    session = fresh(source, seed)
    outcome = session.engine.run()
    return outcome, session.output(), session.engine.step_count


# -- drive modes -----------------------------------------------------------------


def test_run_mode_counts_without_pausing():
    outcome, output, steps = full_run("x = 1+2*3")
    assert isinstance(outcome, Done)
    assert steps == 3 and output == ""


def test_step_mode_pauses_after_n():
    session = fresh("x = 1\ny = 2\nz = 3\n")
    outcome = session.engine.step(2)
    assert isinstance(outcome, Paused)
    assert outcome.event.step_number == 2
    assert session.engine.step_count == 2
    final = session.engine.run()
    assert isinstance(final, Done)
    assert session.engine.step_count == 3


def test_animate_reports_every_event():
    session = fresh("x = 1\ny = 2\n")
    events = []
    outcome = session.engine.animate(0, events.append)
    assert isinstance(outcome, Done)
    assert [e.step_number for e in events] == [1, 2]


def test_animate_sleeps_between_steps():
    session = fresh("x = 1\ny = 2\nz = 3\n")
    naps = []
    session.engine.animate(50, lambda ev: None, sleep=naps.append)
    assert naps == [0.05, 0.05, 0.05]


def test_step_limit_exceeded():
    session = fresh("i = 0\nwhile True:\n    i += 1\n", max_steps=100)
    outcome = session.engine.run()
    assert isinstance(outcome, Failed)
    assert isinstance(outcome.exc, StepLimitExceeded)
    assert session.engine.status == "failed"


def test_limits_off_by_default():
    outcome, _out, steps = full_run(
        "i = 0\nwhile i < 200:\n    i += 1\n"
    )
    assert isinstance(outcome, Done)
    assert steps > 300  # would exceed a fixed 300-step cap


# -- pause/resume transparency -------------------------------------------------------


PAUSE_RESUME_PROGRAMS = sorted(CORPUS_DIR.glob("*.py"))[:50]


def test_pause_resume_transparency_sampled():
    rng = random.Random(20260811)
    trials = 0
    for path in PAUSE_RESUME_PROGRAMS:
        source = path.read_text()
        base_outcome, base_output, base_steps = full_run(source)
        assert isinstance(base_outcome, Done), path.stem
        for _ in range(3):
            k = rng.randint(0, base_steps)
            session = fresh(source)
            if k:
                session.engine.step(k)
            outcome = session.engine.run()
            assert isinstance(outcome, Done), (path.stem, k)
            assert session.output() == base_output, (path.stem, k)
            assert session.engine.step_count == base_steps, (path.stem, k)
            trials += 1
    assert trials == len(PAUSE_RESUME_PROGRAMS) * 3


def test_final_bubble_transparent_to_intermediate_pause():
    source = "x = 1\ny = x + 1\nz = y * 2\n"
    _outcome, _output, total = full_run(source)

    def final_bubble(pre_steps):
        session = fresh(source)
        if pre_steps:
            session.engine.step(pre_steps)
        outcome = session.engine.step(total - pre_steps)
        assert isinstance(outcome, Paused)
        assert outcome.event.step_number == total
        return outcome.event.bubble

    direct = final_bubble(0)
    for k in range(1, total):
        assert final_bubble(k) == direct


# -- bubbles ------------------------------------------------------------------------


def test_assign_bubble_maps_target_to_value():
    session = fresh("x = 2 + 3\n")
    session.engine.step(1)
    outcome = session.engine.step(1)
    event = outcome.event
    assert event.kind == "AssignDone"
    assert event.assign_target == "x"
    assert event.assign_value == "5"
    assert ("x", "5") in event.bubble[-1]


def test_bubble_scopes_innermost_first():
    source = (
        "g = 'global'\n"
        "def outer():\n"
        "    a = 1\n"
        "    def inner():\n"
        "        b = a + 1\n"
        "        return b\n"
        "    return inner()\n"
        "outer()\n"
    )
    session = fresh(source)
    target = None
    while True:
        outcome = session.engine.step(1)
        if not isinstance(outcome, Paused):
            break
        if outcome.event.kind == "AssignDone" and outcome.event.assign_target == "b":
            target = outcome.event
    assert target is not None
    local_scope = target.bubble[0]
    assert ("b", "2") in local_scope
    captured = target.bubble[1]
    assert ("a", "1") in captured
    assert any(name == "g" for name, _ in target.bubble[-1])


def test_bubble_display_truncated():
    session = fresh("x = 'a' * 500\n")
    outcome = session.engine.step(2)
    value = outcome.event.assign_value
    assert len(value) == 70 and value.endswith("…")


# -- stop requests ----------------------------------------------------------------------


def test_stop_flag_from_other_thread():
    session = fresh("i = 0\nwhile True:\n    i += 1\n")

    def stopper():
        session.engine.request_stop()

    timer = threading.Timer(0.2, stopper)
    timer.start()
    outcome = session.engine.run()
    timer.cancel()
    assert isinstance(outcome, Paused)
    assert session.engine.stopped
    assert session.engine.step_count > 0


# -- native stack bound --------------------------------------------------------------------


def run_in_small_stack(fn):
    result = {}

    def wrapper():
        try:
            result["value"] = fn()
        except BaseException as e:  # surface crashes as failures, not aborts
            result["error"] = e

    old = threading.stack_size(512 * 1024)
    try:
        t = threading.Thread(target=wrapper)
        t.start()
        t.join()
    finally:
        threading.stack_size(old)
    if "error" in result:
        raise result["error"]
    return result["value"]


def test_long_loop_constant_native_stack():
    def go():
        outcome, _out, steps = full_run(
            "i = 0\nwhile i < 100000:\n    i = i + 1\nprint(i)\n"
        )
        return outcome, steps

    outcome, steps = run_in_small_stack(go)
    assert isinstance(outcome, Done)
    assert steps == 3 * 100000 + 3


def test_deep_recursion_constant_native_stack():
    source = (
        "def down(n):\n"
        "    if n == 0:\n"
        "        return 0\n"
        "    return down(n - 1)\n"
        "print(down(5000))\n"
    )

    def go():
        session = Session(SessionState(files=[("main.py", source)]), depth_limit=10000)
        outcome = session.run_main()
        return outcome, session.output()

    outcome, output = run_in_small_stack(go)
    assert isinstance(outcome, Done)
    assert output == "0\n"


# -- step determinism ----------------------------------------------------------------------


def test_identical_runs_produce_identical_events():
    source = "import random\nrandom.seed(3)\nx = random.randint(1, 100)\nprint(x)\n"

    def collect():
        session = fresh(source, seed=0)
        events = []
        outcome = session.engine.animate(0, events.append)
        assert isinstance(outcome, Done)
        return [(e.step_number, e.kind, e.span.as_tuple()) for e in events], session.output()

    assert collect() == collect()
