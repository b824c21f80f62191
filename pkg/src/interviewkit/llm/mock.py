"""Deterministic in-process chat backend for tests.

Outcomes are either scripted (a queue of texts/exceptions consumed per call)
or computed by a handler. With neither, the reply is a stable digest of the
request, so identical requests always produce identical responses.
"""
from __future__ import annotations

import hashlib
from typing import Callable

from .gateway import ChatRequest, cache_key


class MockChatBackend:
    """ChatBackend double with scriptable failures and recorded calls."""

    def __init__(
        self,
        handler: Callable[[ChatRequest], str] | None = None,
        script: list[object] | None = None,
    ):
        self.handler = handler
        self.script = list(script) if script else []
        self.calls: list[ChatRequest] = []

    def complete(self, req: ChatRequest, timeout: float) -> tuple[str, dict[str, int]]:
        self.calls.append(req)
        if self.script:
            outcome = self.script.pop(0)
            if isinstance(outcome, BaseException):
                raise outcome
            return str(outcome), self._usage(req, str(outcome))
        if self.handler is not None:
            text = self.handler(req)
            return text, self._usage(req, text)
        text = f"mock-reply:{cache_key(req)[:16]}"
        return text, self._usage(req, text)

    @staticmethod
    def _usage(req: ChatRequest, text: str) -> dict[str, int]:
        prompt_len = sum(len(t.split()) for _, t in req.messages)
        return {
            "prompt_tokens": prompt_len,
            "completion_tokens": len(text.split()),
            "total_tokens": prompt_len + len(text.split()),
        }


def digest_of(text: str) -> str:
    """Short stable digest used by mock handlers to vary output per input."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
