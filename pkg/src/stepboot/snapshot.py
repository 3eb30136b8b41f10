"""Signed, URL-embeddable session snapshots.

The payload is canonical JSON (fixed field order v, lang, files, repl,
steps, exec, seed; no insignificant whitespace; UTF-8) so encoding is
byte-deterministic. The URL fragment carries base64url (unpadded) payload
bytes and, when a key is given, an HMAC-SHA256 signature over the raw
payload bytes: `<base>#state=<payload>&sig=<sig>`.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json

from .errors import ReplayDivergence, SnapshotDecodeError
from .session import Session, SessionState
from .stepper import Paused

URL_LENGTH_WARNING = 8000

TRUST_SIGNED = "signed-valid"
TRUST_UNSIGNED = "unsigned"
TRUST_INVALID = "invalid"


def canonical_payload(state: SessionState) -> bytes:
    steps, executing = state.steps, state.executing
    payload = {
        "v": 1,
        "lang": "py",
        "files": [{"n": n, "c": c} for n, c in state.files],
        "repl": list(state.repl_history),
        "steps": steps,
        "exec": executing,
        "seed": state.seed,
    }
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def b64url_encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def b64url_decode(text: str) -> bytes:
    pad = "=" * (-len(text) % 4)
    try:
        return base64.urlsafe_b64decode(text + pad)
    except Exception as e:
        raise SnapshotDecodeError(f"malformed base64url payload: {e}", field="state")


def sign_payload(key: bytes | str, payload: bytes) -> bytes:
    if isinstance(key, str):
        key = key.encode("utf-8")
    return hmac.new(key, payload, hashlib.sha256).digest()


class SignedLink:
    def __init__(self, base, payload_b64, sig_b64):
        self.base = base
        self.payload_b64 = payload_b64
        self.sig_b64 = sig_b64

    @property
    def url(self) -> str:
        url = f"{self.base}#state={self.payload_b64}"
        if self.sig_b64 is not None:
            url += f"&sig={self.sig_b64}"
        return url

    @property
    def oversize(self) -> bool:
        """True when the URL exceeds common server length limits."""
        return len(self.url.encode("utf-8")) > URL_LENGTH_WARNING

    def __repr__(self):
        return f"SignedLink({self.url[:60]}...)" if len(self.url) > 60 else self.url


def encode_snapshot(state: SessionState, key=None, base="") -> SignedLink:
    payload = canonical_payload(state)
    sig_b64 = None
    if key:
        sig_b64 = b64url_encode(sign_payload(key, payload))
    return SignedLink(base, b64url_encode(payload), sig_b64)


def _expect(cond, message, field):
    if not cond:
        raise SnapshotDecodeError(message, field=field)


def parse_fragment(url: str):
    """-> (payload_b64, sig_b64 or None)"""
    marker = "#state="
    at = url.find(marker)
    _expect(at >= 0, "no #state= fragment in URL", "state")
    fragment = url[at + len(marker):]
    sig = None
    if "&sig=" in fragment:
        fragment, sig = fragment.split("&sig=", 1)
        sig = sig.split("&", 1)[0]
    return fragment, sig


def _validate_payload(data):
    _expect(isinstance(data, dict), "payload is not a JSON object", "state")
    _expect("v" in data, "missing field 'v'", "v")
    _expect(data["v"] == 1, f"unknown snapshot version {data['v']!r}", "v")
    for field in ("lang", "files", "repl", "steps", "exec", "seed"):
        _expect(field in data, f"missing field '{field}'", field)
    _expect(data["lang"] == "py", f"unsupported lang {data['lang']!r}", "lang")
    _expect(isinstance(data["files"], list), "'files' is not a list", "files")
    for entry in data["files"]:
        _expect(
            isinstance(entry, dict)
            and isinstance(entry.get("n"), str)
            and isinstance(entry.get("c"), str),
            "file entries need string fields 'n' and 'c'",
            "files",
        )
    _expect(
        isinstance(data["repl"], list)
        and all(isinstance(x, str) for x in data["repl"]),
        "'repl' is not a list of strings",
        "repl",
    )
    _expect(
        data["steps"] is None or (isinstance(data["steps"], int) and data["steps"] >= 0),
        "'steps' must be a non-negative integer or null",
        "steps",
    )
    _expect(isinstance(data["exec"], bool), "'exec' must be a boolean", "exec")
    _expect(isinstance(data["seed"], int), "'seed' must be an integer", "seed")


def decode_snapshot(url: str, key=None):
    """-> (SessionState, trust); trust is signed-valid / unsigned / invalid."""
    payload_b64, sig_b64 = parse_fragment(url)
    payload = b64url_decode(payload_b64)
    try:
        data = json.loads(payload.decode("utf-8"))
    except Exception as e:
        raise SnapshotDecodeError(f"payload is not valid JSON: {e}", field="state")
    _validate_payload(data)
    if sig_b64 is None:
        trust = TRUST_UNSIGNED
    elif key is None:
        trust = TRUST_UNSIGNED  # signature present but unverifiable without a key
    else:
        expected = sign_payload(key, payload)
        try:
            provided = b64url_decode(sig_b64)
        except SnapshotDecodeError:
            provided = b""
        trust = TRUST_SIGNED if hmac.compare_digest(expected, provided) else TRUST_INVALID
    state = SessionState(
        files=[(f["n"], f["c"]) for f in data["files"]],
        repl_history=list(data["repl"]),
        seed=data["seed"],
    )
    state.steps = data["steps"]
    state.executing = data["exec"]
    return state, trust


def capture(session: Session) -> SessionState:
    """Snapshot the live session into a fresh SessionState."""
    state = SessionState(
        files=list(session.state.files),
        repl_history=list(session.state.repl_history),
        seed=session.state.seed,
    )
    steps, executing = session.capture_steps()
    state.steps = steps
    state.executing = executing
    return state


def replay_to(state: SessionState, **session_kwargs) -> Session:
    """Rebuild a session: files loaded, REPL entries re-executed, and the
    active file driven to the recorded step count."""
    live = SessionState(files=list(state.files), seed=state.seed)
    session = Session(live, **session_kwargs)
    history = list(state.repl_history)
    for entry in history:
        session.repl_eval(entry)
    # repl_eval records history again; keep a single copy
    session.state.repl_history = history
    if state.executing and state.steps is not None:
        session.load_main()
        if state.steps > 0:
            outcome = session.engine.step(state.steps)
            if not isinstance(outcome, Paused):
                raise ReplayDivergence(
                    f"program ended after {session.engine.step_count} steps; "
                    f"snapshot recorded {state.steps}"
                )
            if session.engine.step_count != state.steps:
                raise ReplayDivergence(
                    f"replay reached step {session.engine.step_count}, "
                    f"snapshot recorded {state.steps}"
                )
    return session
