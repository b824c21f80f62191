"""Append-only audit trail.

Every externally visible action becomes one immutable event on a per-stream
sequence (a session id, or the shared "global" stream for pre-session work).
Sequences are gapless, so a verifier can prove nothing was dropped, and the
"turn" events alone reconstruct a session transcript byte for byte.

Events optionally persist as JSON lines; the file is only ever appended to.
Payloads must never carry secret material, and the obvious key names are
rejected outright.
"""
from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..errors import InvalidParams

AUDIT_KINDS = (
    "doc_ingested",
    "assessment_issued",
    "bank_generated",
    "turn",
    "decision",
    "feedback",
    "report_issued",
    "contest_raised",
)

GLOBAL_STREAM = "global"

_FORBIDDEN_PAYLOAD_KEYS = frozenset(
    {
        "authorization",
        "api_key",
        "apikey",
        "access_token",
        "auth_token",
        "bearer_token",
        "secret",
        "password",
    }
)


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def payload_digest(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()


def _check_no_secrets(value: object) -> None:
    if isinstance(value, dict):
        for key, inner in value.items():
            if str(key).casefold() in _FORBIDDEN_PAYLOAD_KEYS:
                raise InvalidParams(
                    f"audit payloads must not carry credentials (key {key!r})"
                )
            _check_no_secrets(inner)
    elif isinstance(value, (list, tuple)):
        for inner in value:
            _check_no_secrets(inner)


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    session_id: str
    kind: str
    payload: dict
    payload_digest: str
    timestamp: float

    def __post_init__(self):
        if self.kind not in AUDIT_KINDS:
            raise InvalidParams(f"unknown audit kind {self.kind!r}")
        if self.seq < 1:
            raise InvalidParams("audit seq starts at 1")

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "session_id": self.session_id,
            "kind": self.kind,
            "payload": self.payload,
            "payload_digest": self.payload_digest,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditEvent":
        return cls(
            seq=int(data["seq"]),
            session_id=str(data["session_id"]),
            kind=str(data["kind"]),
            payload=dict(data["payload"]),
            payload_digest=str(data["payload_digest"]),
            timestamp=float(data["timestamp"]),
        )


class AuditLog:
    """Per-stream gapless event sequences with optional JSONL persistence."""

    def __init__(self, path: str | Path | None = None, now: Callable[[], float] = time.time):
        self._path = Path(path) if path is not None else None
        self._now = now
        self._events: dict[str, list[AuditEvent]] = {}
        self._lock = threading.Lock()
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, session_id: str, kind: str, payload: dict) -> AuditEvent:
        if not session_id:
            raise InvalidParams("audit events need a stream id")
        _check_no_secrets(payload)
        with self._lock:
            stream = self._events.setdefault(session_id, [])
            event = AuditEvent(
                seq=len(stream) + 1,
                session_id=session_id,
                kind=kind,
                payload=payload,
                payload_digest=payload_digest(payload),
                timestamp=self._now(),
            )
            stream.append(event)
            if self._path is not None:
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(_canonical(event.to_dict()) + "\n")
            return event

    def events(self, session_id: str) -> tuple[AuditEvent, ...]:
        with self._lock:
            return tuple(self._events.get(session_id, ()))

    def streams(self) -> list[str]:
        with self._lock:
            return sorted(self._events)

    def is_gapless(self, session_id: str) -> bool:
        return [e.seq for e in self.events(session_id)] == list(
            range(1, len(self.events(session_id)) + 1)
        )

    def replay_transcript(self, session_id: str) -> list[dict]:
        """Transcript as recorded: the payloads of the turn events, in order."""
        return [e.payload for e in self.events(session_id) if e.kind == "turn"]

    @classmethod
    def load(cls, path: str | Path, now: Callable[[], float] = time.time) -> "AuditLog":
        log = cls(path=None, now=now)
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = AuditEvent.from_dict(json.loads(line))
                log._events.setdefault(event.session_id, []).append(event)
        log._path = Path(path)
        return log
