"""Uniform chat-completion access to multiple backends.

One gateway instance owns backend registration, an in-memory response cache,
and the retry policy. Backends speak the OpenAI-compatible chat-completions
JSON shape; anything else can be plugged in through the ``ChatBackend``
protocol (the deterministic mocks in :mod:`interviewkit.llm.mock` do).

Secrets never appear in configuration values or logs: a backend config only
names the environment variable holding its API key.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol

import httpx

from ..config import BackendConfig
from ..errors import (
    BackendTimeout,
    BackendUnavailable,
    DuplicateBackend,
    UnknownBackend,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChatRequest:
    """A single chat completion call.

    ``cache_eligible`` marks requests whose answers are stable given the
    prompt (structuring, assessment, question banks); live conversation turns
    must leave it off.
    """

    backend_id: str
    messages: tuple[tuple[str, str], ...]
    system_prompt: str = ""
    temperature: float = 0.2
    max_output_tokens: int | None = None
    cache_eligible: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "messages", tuple((str(r), str(t)) for r, t in self.messages)
        )
        if not self.messages:
            raise ValueError("ChatRequest.messages must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    backend_id: str
    latency: float
    from_cache: bool = False
    token_usage: dict[str, int] = field(default_factory=dict)
    retries: int = 0


@dataclass
class CacheEntry:
    key: str
    response: ChatResponse
    inserted_at: float
    ttl: float


class ChatBackend(Protocol):
    """Transport for one backend: returns (text, token_usage) or raises
    BackendTimeout / BackendUnavailable."""

    def complete(self, req: ChatRequest, timeout: float) -> tuple[str, dict[str, int]]: ...


def cache_key(req: ChatRequest) -> str:
    """Digest over the canonical serialization of the response-determining
    fields, so key equality implies request equality."""
    canonical = json.dumps(
        {
            "backend_id": req.backend_id,
            "system_prompt": req.system_prompt,
            "messages": [list(m) for m in req.messages],
            "temperature": req.temperature,
        },
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class HttpChatBackend:
    """OpenAI-compatible chat-completions client for one configured backend."""

    def __init__(self, config: BackendConfig, client: httpx.Client | None = None):
        self.config = config
        self._client = client or httpx.Client()
        endpoint = config.endpoint.rstrip("/")
        if not endpoint.endswith("/chat/completions"):
            endpoint = endpoint + "/chat/completions"
        self._url = endpoint

    def complete(self, req: ChatRequest, timeout: float) -> tuple[str, dict[str, int]]:
        messages = []
        if req.system_prompt:
            messages.append({"role": "system", "content": req.system_prompt})
        messages.extend({"role": r, "content": t} for r, t in req.messages)
        payload: dict[str, object] = {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": req.temperature,
        }
        if req.max_output_tokens is not None:
            payload["max_tokens"] = req.max_output_tokens
        headers = {}
        secret = os.environ.get(self.config.auth_ref, "") if self.config.auth_ref else ""
        if secret:
            headers["Authorization"] = f"Bearer {secret}"
        try:
            resp = self._client.post(
                self._url, json=payload, headers=headers, timeout=timeout
            )
        except httpx.TimeoutException as exc:
            raise BackendTimeout(
                f"backend {self.config.backend_id} timed out after {timeout}s"
            ) from exc
        except httpx.HTTPError as exc:
            raise BackendUnavailable(
                f"backend {self.config.backend_id} unreachable: {type(exc).__name__}"
            ) from exc
        if resp.status_code != 200:
            raise BackendUnavailable(
                f"backend {self.config.backend_id} returned HTTP {resp.status_code}"
            )
        try:
            data = resp.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise BackendUnavailable(
                f"backend {self.config.backend_id} returned a malformed body"
            ) from exc
        usage = data.get("usage") or {}
        token_usage = {k: v for k, v in usage.items() if isinstance(v, int)}
        return str(text), token_usage


class LlmGateway:
    """Routes ChatRequests to registered backends with caching and retries."""

    def __init__(
        self,
        retries: int = 2,
        timeout: float = 60.0,
        backoff: float = 0.5,
        cache_ttl: float = 86400.0,
        now: Callable[[], float] = time.time,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.retries = retries
        self.timeout = timeout
        self.backoff = backoff
        self.cache_ttl = cache_ttl
        self._now = now
        self._sleep = sleep
        self._backends: dict[str, ChatBackend] = {}
        self._cache: dict[str, CacheEntry] = {}
        self._lock = threading.Lock()

    def register_backend(
        self, config: BackendConfig, transport: ChatBackend | None = None
    ) -> None:
        """Make a backend selectable; ``transport`` overrides the default
        HTTP client (used to plug in mocks)."""
        with self._lock:
            if config.backend_id in self._backends:
                raise DuplicateBackend(f"backend {config.backend_id!r} already registered")
            self._backends[config.backend_id] = transport or HttpChatBackend(config)

    def backend_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._backends)

    def complete(self, req: ChatRequest) -> ChatResponse:
        try:
            backend = self._backends[req.backend_id]
        except KeyError:
            raise UnknownBackend(f"no backend registered as {req.backend_id!r}") from None

        key = cache_key(req) if req.cache_eligible else None
        if key is not None:
            cached = self._cache_get(key)
            if cached is not None:
                return replace(cached, from_cache=True)

        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                self._sleep(self.backoff * (2 ** (attempt - 1)))
            started = time.perf_counter()
            try:
                text, usage = backend.complete(req, self.timeout)
            except (BackendTimeout, BackendUnavailable) as exc:
                last_error = exc
                log.warning(
                    "backend %s attempt %d/%d failed: %s",
                    req.backend_id, attempt + 1, self.retries + 1, type(exc).__name__,
                )
                continue
            if not text:
                last_error = BackendUnavailable(
                    f"backend {req.backend_id} returned empty text"
                )
                continue
            response = ChatResponse(
                text=text,
                backend_id=req.backend_id,
                latency=time.perf_counter() - started,
                from_cache=False,
                token_usage=usage,
                retries=attempt,
            )
            if key is not None:
                self._cache_put(key, response)
            return response
        assert last_error is not None
        raise last_error

    # -- cache -----------------------------------------------------------------

    def _cache_get(self, key: str) -> ChatResponse | None:
        with self._lock:
            entry = self._cache.get(key)
            if entry is None:
                return None
            if self._now() - entry.inserted_at >= entry.ttl:
                del self._cache[key]
                return None
            return entry.response

    def _cache_put(self, key: str, response: ChatResponse) -> None:
        with self._lock:
            self._cache.setdefault(
                key, CacheEntry(key, response, self._now(), self.cache_ttl)
            )
