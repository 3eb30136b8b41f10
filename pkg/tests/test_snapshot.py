"""Snapshot encoding: canonical bytes, base64url against an independent
encoder, HMAC-SHA256 against RFC 4231 vectors, tamper rejection, replay."""

import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stepboot.errors import ReplayDivergence, SnapshotDecodeError
from stepboot.session import Session, SessionState
from stepboot.snapshot import (
    TRUST_INVALID,
    TRUST_SIGNED,
    TRUST_UNSIGNED,
    b64url_encode,
    canonical_payload,
    capture,
    decode_snapshot,
    encode_snapshot,
    replay_to,
    sign_payload,
)
from stepboot.stepper import Done, Paused

CORPUS_DIR = Path(__file__).parent / "corpus"


# -- canonical form -------------------------------------------------------------


def test_empty_session_canonical_bytes():
    state = SessionState()
    assert canonical_payload(state) == (
        b'{"v":1,"lang":"py","files":[],"repl":[],"steps":null,"exec":false,"seed":0}'
    )


def test_canonical_field_order_and_unicode():
    state = SessionState(files=[("f.py", "s = 'é'")], repl_history=["café"], seed=3)
    payload = canonical_payload(state)
    data = json.loads(payload.decode("utf-8"))
    assert list(data.keys()) == ["v", "lang", "files", "repl", "steps", "exec", "seed"]
    assert list(data["files"][0].keys()) == ["n", "c"]
    assert "\\u" not in payload.decode("utf-8")  # minimal escaping


def test_byte_determinism():
    state = SessionState(files=[("a.py", "x=1"), ("b.py", "y=2")], repl_history=["a"])
    assert canonical_payload(state) == canonical_payload(state)
    assert encode_snapshot(state, key="k", base="b").url == (
        encode_snapshot(state, key="k", base="b").url
    )


# -- base64url against an independent encoder --------------------------------------

_B64_ALPHABET = (
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"
)


def independent_b64url(data: bytes) -> str:
    """Bit-level base64url (unpadded), written from the alphabet definition."""
    out = []
    bits = 0
    acc = 0
    for byte in data:
        acc = (acc << 8) | byte
        bits += 8
        while bits >= 6:
            bits -= 6
            out.append(_B64_ALPHABET[(acc >> bits) & 0x3F])
            acc &= (1 << bits) - 1
    if bits:
        out.append(_B64_ALPHABET[(acc << (6 - bits)) & 0x3F])
    return "".join(out)


def test_payload_b64_matches_independent_encoder():
    state = SessionState()
    payload = canonical_payload(state)
    assert encode_snapshot(state).payload_b64 == independent_b64url(payload)


@given(st.binary(max_size=200))
def test_b64url_matches_independent_encoder_on_random_bytes(data):
    assert b64url_encode(data) == independent_b64url(data)


# -- HMAC-SHA256: RFC 4231 test cases 1-4 ---------------------------------------------

RFC4231_CASES = [
    (
        bytes([0x0B] * 20),
        b"Hi There",
        "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7",
    ),
    (
        b"Jefe",
        b"what do ya want for nothing?",
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843",
    ),
    (
        bytes([0xAA] * 20),
        bytes([0xDD] * 50),
        "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe",
    ),
    (
        bytes(range(0x01, 0x1A)),
        bytes([0xCD] * 50),
        "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b",
    ),
]


@pytest.mark.parametrize("case", range(1, 5))
def test_hmac_sha256_rfc4231(case):
    key, message, expected_hex = RFC4231_CASES[case - 1]
    assert sign_payload(key, message).hex() == expected_hex


# -- round-trip and trust ---------------------------------------------------------------


def random_state(rng):
    files = [
        (f"f{i}.py", "".join(rng.choice("abc =\n1+#") for _ in range(rng.randint(0, 40))))
        for i in range(rng.randint(0, 4))
    ]
    history = [
        "".join(rng.choice("xyz() 123\n") for _ in range(rng.randint(0, 20)))
        for _ in range(rng.randint(0, 4))
    ]
    state = SessionState(files=files, repl_history=history, seed=rng.randint(0, 2**31))
    if rng.random() < 0.4:
        state.steps = rng.randint(0, 100)
        state.executing = True
    return state


def states_equal(a, b):
    return (
        a.files == b.files
        and a.repl_history == b.repl_history
        and a.seed == b.seed
        and a.steps == b.steps
        and a.executing == b.executing
    )


def test_roundtrip_100_random_sessions():
    rng = random.Random(7)
    for _ in range(100):
        state = random_state(rng)
        link = encode_snapshot(state, key="secret", base="https://s/")
        decoded, trust = decode_snapshot(link.url, key="secret")
        assert trust == TRUST_SIGNED
        assert states_equal(decoded, state)


def test_unsigned_and_invalid_trust():
    state = SessionState(files=[("a.py", "x=1")])
    unsigned = encode_snapshot(state, base="b")
    assert decode_snapshot(unsigned.url)[1] == TRUST_UNSIGNED
    signed = encode_snapshot(state, key="k1", base="b")
    assert decode_snapshot(signed.url, key="k2")[1] == TRUST_INVALID
    assert decode_snapshot(signed.url)[1] == TRUST_UNSIGNED


def test_tamper_1000_trials_never_verify():
    rng = random.Random(99)
    rejected = 0
    for _ in range(1000):
        state = random_state(rng)
        key = bytes(rng.randrange(256) for _ in range(16))
        payload = canonical_payload(state)
        flipped = bytearray(payload)
        pos = rng.randrange(len(flipped))
        bit = 1 << rng.randrange(8)
        flipped[pos] ^= bit
        url = (
            "b#state=" + b64url_encode(bytes(flipped)) + "&sig="
            + b64url_encode(sign_payload(key, payload))
        )
        try:
            _, trust = decode_snapshot(url, key=key)
        except SnapshotDecodeError:
            rejected += 1  # tampering broke the JSON itself
            continue
        assert trust == TRUST_INVALID
        rejected += 1
    assert rejected == 1000


@settings(max_examples=50)
@given(
    files=st.lists(
        st.tuples(
            st.from_regex(r"[a-z][a-z0-9_]{0,10}\.py", fullmatch=True),
            st.text(max_size=50),
        ),
        max_size=3,
        unique_by=lambda kv: kv[0],
    ),
    history=st.lists(st.text(max_size=30), max_size=3),
    seed=st.integers(min_value=0, max_value=2**62),
)
def test_roundtrip_property(files, history, seed):
    state = SessionState(files=files, repl_history=history, seed=seed)
    decoded, trust = decode_snapshot(
        encode_snapshot(state, key="k", base="x").url, key="k"
    )
    assert trust == TRUST_SIGNED
    assert states_equal(decoded, state)


# -- decode errors name the failing field ---------------------------------------------------


def field_error(url, key=None):
    with pytest.raises(SnapshotDecodeError) as exc:
        decode_snapshot(url, key=key)
    return exc.value.field


def test_decode_error_fields():
    assert field_error("https://x/nofragment") == "state"
    assert field_error("x#state=!!!bad b64!!!") == "state"
    assert field_error("x#state=" + b64url_encode(b"not json")) == "state"
    assert field_error("x#state=" + b64url_encode(b'{"v":2}')) == "v"
    good = {
        "v": 1, "lang": "py", "files": [], "repl": [],
        "steps": None, "exec": False, "seed": 0,
    }
    bad = dict(good)
    bad["lang"] = "scheme"
    assert field_error("x#state=" + b64url_encode(json.dumps(bad).encode())) == "lang"
    bad = dict(good)
    bad["files"] = [{"n": 1, "c": ""}]
    assert field_error("x#state=" + b64url_encode(json.dumps(bad).encode())) == "files"
    bad = dict(good)
    bad["steps"] = -4
    assert field_error("x#state=" + b64url_encode(json.dumps(bad).encode())) == "steps"
    bad = dict(good)
    del bad["seed"]
    assert field_error("x#state=" + b64url_encode(json.dumps(bad).encode())) == "seed"


def test_oversize_warning_threshold():
    state = SessionState(files=[("big.py", "x" * 9000)])
    link = encode_snapshot(state, base="b")
    assert link.oversize
    small = encode_snapshot(SessionState(), base="b")
    assert not small.oversize


# -- replay -----------------------------------------------------------------------------------


def test_replay_normative_example():
    session = Session(SessionState(files=[("main.py", "x=1+2*3")]))
    session.load_main()
    session.engine.step(2)
    snap = capture(session)
    assert snap.steps == 2 and snap.executing
    replayed = replay_to(snap)
    assert replayed.engine.step_count == 2
    event = replayed.engine.last_event
    assert event.kind == "ExprEnd" and event.span.text() == "1+2*3"


def test_replay_steps_zero_loads_without_starting():
    state = SessionState(files=[("main.py", "x = 5")])
    state.steps = 0
    state.executing = True
    session = replay_to(state)
    assert session.engine.step_count == 0
    assert session.engine.status == "loaded"


def test_replay_divergence_when_program_too_short():
    state = SessionState(files=[("main.py", "x = 1")])
    state.steps = 50
    state.executing = True
    with pytest.raises(ReplayDivergence):
        replay_to(state)


def test_replay_includes_repl_effects():
    session = Session(SessionState(files=[("main.py", "print(base + 1)\n")]))
    session.repl_eval("base = 41")
    session.load_main()
    session.engine.run()
    assert session.output().endswith("42\n")
    snap = capture(session)
    snap.steps = None
    snap.executing = False
    replayed = replay_to(snap)
    assert replayed.repl_eval("base").display == "41"


REPLAY_PROGRAMS = [
    p for p in sorted(CORPUS_DIR.glob("*.py"))
    if p.stem.startswith(("algo_", "fn_", "class_", "exc_"))
][:20]


@pytest.mark.parametrize("path", REPLAY_PROGRAMS, ids=[p.stem for p in REPLAY_PROGRAMS])
def test_replay_fidelity_five_points(path):
    source = path.read_text()
    base = Session(SessionState(files=[("main.py", source)]))
    outcome = base.run_main()
    assert isinstance(outcome, Done)
    total = base.engine.step_count
    rng = random.Random(path.stem)
    points = sorted({rng.randint(1, total) for _ in range(5)})
    for k in points:
        probe = Session(SessionState(files=[("main.py", source)]))
        probe.load_main()
        paused = probe.engine.step(k)
        assert isinstance(paused, Paused)
        expected = paused.event
        snap = capture(probe)
        replayed = replay_to(snap)
        got = replayed.engine.last_event
        assert got.step_number == expected.step_number == k
        assert got.kind == expected.kind
        assert got.span.as_tuple() == expected.span.as_tuple()
        assert got.bubble == expected.bubble
