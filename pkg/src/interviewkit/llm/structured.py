"""Structured-output calls: one repair retry, then fail loudly."""
from __future__ import annotations

import json
import re
from dataclasses import replace
from typing import Callable, TypeVar

from ..errors import BackendTimeout, BackendUnavailable, LlmFailure, SchemaViolation
from .gateway import ChatRequest, ChatResponse, LlmGateway

T = TypeVar("T")

_FENCED_JSON_RE = re.compile(r"```(?:json)?\s*(\{.*?\})\s*```", re.DOTALL)


def extract_json_object(text: str) -> dict:
    """Pull the JSON object out of an LLM reply, tolerating code fences and
    surrounding prose."""
    candidates = [text.strip()]
    fenced = _FENCED_JSON_RE.search(text)
    if fenced:
        candidates.append(fenced.group(1))
    start, end = text.find("{"), text.rfind("}")
    if 0 <= start < end:
        candidates.append(text[start : end + 1])
    for candidate in candidates:
        try:
            data = json.loads(candidate)
        except ValueError:
            continue
        if isinstance(data, dict):
            return data
    raise ValueError("no JSON object found in reply")


def complete_with_repair(
    llm: LlmGateway,
    request: ChatRequest,
    parse: Callable[[str], T],
    repair_suffix: str,
) -> tuple[T, ChatResponse]:
    """Run ``request``; if ``parse`` rejects the reply, retry once with the
    rejected reply and ``repair_suffix`` appended to the conversation.

    Backend transport failures surface as LlmFailure; a second parse failure
    surfaces as SchemaViolation.
    """
    messages = list(request.messages)
    last_error: Exception | None = None
    for _ in range(2):
        attempt = replace(request, messages=tuple(messages))
        try:
            response = llm.complete(attempt)
        except (BackendTimeout, BackendUnavailable) as exc:
            raise LlmFailure(str(exc), retryable=True) from exc
        try:
            return parse(response.text), response
        except (ValueError, SchemaViolation) as exc:
            last_error = exc
            messages = messages + [("assistant", response.text), ("user", repair_suffix)]
    raise SchemaViolation(f"output failed validation after repair retry: {last_error}")
