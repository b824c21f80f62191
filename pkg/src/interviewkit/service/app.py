"""HTTP/WebSocket facade over the whole engine.

One process owns the vector index, the LLM gateway, the media providers, the
session table, and the audit log. Endpoints stay thin: they translate wire
shapes to module calls and domain errors to status codes. Per-session work is
serialized under a session lock; the WebSocket stream yields exactly one
reply per client message.

Auth is a single optional bearer token whose value lives in the environment
variable named by ``auth_token_env``; the token itself is never logged or
audited.
"""
from __future__ import annotations

import base64
import hashlib
import os
import threading
import time
from typing import Callable

from fastapi import APIRouter, Depends, FastAPI, Form, HTTPException, Request, UploadFile
from fastapi import WebSocket, WebSocketDisconnect
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import Response
from pydantic import BaseModel

from ..assessment import assess
from ..config import BackendConfig, ServiceConfig
from ..documents.chunking import chunk
from ..documents.extract import extract_text
from ..documents.structure import structure_markdown
from ..documents.types import NormalizedText, RawDocument, StructuredDoc
from ..errors import (
    BackendTimeout,
    BackendUnavailable,
    DuplicateFeedback,
    EmptyAfterFiltering,
    EmptyBank,
    EmptyDocument,
    EmptySetInput,
    InsufficientItems,
    InterviewKitError,
    InvalidParams,
    LlmFailure,
    OutOfTurn,
    ProviderUnavailable,
    SchemaViolation,
    SessionClosed,
    SessionStillRunning,
    UnknownBackend,
    UnknownExchange,
    UnparseableMarkdown,
    UnsupportedFormat,
    UnsupportedLanguage,
    UnsupportedSampleRate,
)
from ..index.embedding import (
    HttpEmbeddingProvider,
    MockEmbeddingProvider,
    embed,
)
from ..index.store import ChunkMeta, ChunkRecord, VectorIndex
from ..llm.gateway import LlmGateway
from ..llm.interview_mock import InterviewMockBackend
from ..media import (
    HttpSttProvider,
    HttpTtsProvider,
    MockSttProvider,
    MockTtsProvider,
    audio_to_wav_bytes,
    synthesize,
    transcribe,
    wav_bytes_to_audio,
)
from ..questions import generate_bank
from ..session.engine import (
    decide_next,
    ingest_candidate,
    interviewer_reply,
    record_feedback,
    session_report,
    start_session,
)
from .audit import GLOBAL_STREAM, AuditLog

SESSION_LANGUAGES = ("en", "ja")

WS_CLOSE_OUT_OF_TURN = 4000
WS_CLOSE_SESSION_CLOSED = 4001
WS_CLOSE_BACKEND_FAILED = 4002
WS_CLOSE_NOT_FOUND = 4404
WS_CLOSE_UNAUTHORIZED = 4401

_BAD_REQUEST = (
    EmptyDocument,
    UnsupportedFormat,
    UnparseableMarkdown,
    InvalidParams,
    UnsupportedSampleRate,
    UnsupportedLanguage,
    EmptyAfterFiltering,
    EmptySetInput,
)
_NOT_FOUND = (UnknownExchange,)
_CONFLICT = (DuplicateFeedback, SessionStillRunning, SessionClosed, OutOfTurn)
_BAD_GATEWAY = (
    LlmFailure,
    SchemaViolation,
    BackendUnavailable,
    BackendTimeout,
    UnknownBackend,
    InsufficientItems,
    ProviderUnavailable,
    EmptyBank,
)


def _raise_http(exc: InterviewKitError) -> None:
    for types, code in (
        (_BAD_REQUEST, 400),
        (_NOT_FOUND, 404),
        (_CONFLICT, 409),
        (_BAD_GATEWAY, 502),
    ):
        if isinstance(exc, types):
            raise HTTPException(status_code=code, detail=str(exc)) from exc
    raise exc


class AssessmentBody(BaseModel):
    resume_id: str
    jd_id: str


class SessionBody(BaseModel):
    resume_id: str
    jd_id: str
    language: str = "en"
    role_profile: str = "general"


class FeedbackBody(BaseModel):
    exchange_index: int
    value: int


class ContestBody(BaseModel):
    exchange_index: int
    reason: str


class SearchBody(BaseModel):
    query: str
    k: int = 10
    threshold: float | None = None


class _DocumentEntry:
    def __init__(
        self,
        raw: RawDocument,
        normalized: NormalizedText,
        structured: StructuredDoc,
        chunks: list,
    ):
        self.raw = raw
        self.normalized = normalized
        self.structured = structured
        self.chunks = chunks


class _SessionEntry:
    def __init__(self, state, matches):
        self.state = state
        self.matches = matches
        self.lock = threading.Lock()


class ServiceRuntime:
    """Everything the endpoints share; injectable clock and providers keep
    the whole service deterministic under test."""

    def __init__(
        self,
        config: ServiceConfig | None = None,
        use_mock: bool = False,
        clock: Callable[[], float] = time.time,
        audit: AuditLog | None = None,
    ):
        self.config = config or ServiceConfig()
        self.clock = clock
        audit_path = (
            os.path.join(self.config.data_dir, "audit.jsonl")
            if self.config.data_dir
            else None
        )
        self.audit = audit if audit is not None else AuditLog(audit_path, now=clock)

        self.gateway = LlmGateway(
            retries=self.config.llm_retries,
            timeout=self.config.llm_timeout,
            backoff=self.config.llm_backoff,
            cache_ttl=self.config.cache_ttl,
            now=clock,
        )
        if not use_mock:
            for backend in self.config.backends:
                self.gateway.register_backend(backend)
        if self.config.default_backend not in self.gateway.backend_ids():
            self.gateway.register_backend(
                BackendConfig(backend_id=self.config.default_backend),
                transport=InterviewMockBackend(),
            )

        if self.config.embedding_url and not use_mock:
            self.embedder = HttpEmbeddingProvider(
                self.config.embedding_url, self.config.embedding_model
            )
        else:
            self.embedder = MockEmbeddingProvider(self.config.embedding_dim)

        if self.config.stt_url and not use_mock:
            self.stt = HttpSttProvider(self.config.stt_url)
        else:
            self.stt = MockSttProvider()
        if self.config.tts_url and not use_mock:
            self.tts = HttpTtsProvider(self.config.tts_url)
        else:
            self.tts = MockTtsProvider()

        self.index = VectorIndex(dim=self.config.embedding_dim, params=self.config.hnsw)
        self.documents: dict[str, _DocumentEntry] = {}
        self.sessions: dict[str, _SessionEntry] = {}
        self.tickets: dict[str, dict] = {}
        self._counter_lock = threading.Lock()
        self._session_counter = 0
        self._ticket_counter = 0

    # -- helpers -----------------------------------------------------------------

    def _next_session_id(self) -> str:
        with self._counter_lock:
            self._session_counter += 1
            return f"s{self._session_counter:04d}"

    def _next_ticket_id(self) -> str:
        with self._counter_lock:
            self._ticket_counter += 1
            return f"t{self._ticket_counter:04d}"

    def _document(self, doc_id: str, kind: str) -> _DocumentEntry:
        entry = self.documents.get(doc_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
        if entry.raw.kind != kind:
            raise HTTPException(
                status_code=400,
                detail=f"document {doc_id!r} is a {entry.raw.kind}, expected {kind}",
            )
        return entry

    def _session(self, session_id: str) -> _SessionEntry:
        entry = self.sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return entry

    def _requirement_matches(self, jd: _DocumentEntry):
        return self.index.match_requirements(
            jd.chunks,
            self.embedder,
            k=self.config.retrieval_k,
            threshold=self.config.similarity_threshold,
        )

    # -- operations --------------------------------------------------------------

    def ingest_document(self, content: bytes, filename: str, kind: str, language: str) -> dict:
        doc_id = hashlib.sha256(content).hexdigest()[:12]
        fmt = _sniff_format(filename, content)
        raw = RawDocument(id=doc_id, kind=kind, language=language, format=fmt, content=content)
        normalized = extract_text(raw)
        structured = structure_markdown(
            normalized,
            kind,
            self.gateway,
            backend_id=self.config.default_backend,
            temperature=self.config.structured_temperature,
        )
        source = normalized
        if self.config.chunk_source == "markdown":
            source = NormalizedText(
                doc_id=normalized.doc_id,
                text=structured.markdown,
                language=normalized.language,
            )
        chunks = chunk(
            source, chunk_size=self.config.chunk_size, overlap=self.config.chunk_overlap
        )
        records = [
            ChunkRecord(
                chunk_id=f"{doc_id}:{i:04d}",
                doc_id=doc_id,
                vector=embed(piece.text, self.embedder),
                text=piece.text,
                metadata=ChunkMeta(kind=kind, language=normalized.language, seq=i),
            )
            for i, piece in enumerate(chunks)
        ]
        self.index.upsert(records)
        self.documents[doc_id] = _DocumentEntry(raw, normalized, structured, chunks)
        self.audit.append(
            GLOBAL_STREAM,
            "doc_ingested",
            {
                "doc_id": doc_id,
                "kind": kind,
                "language": normalized.language,
                "format": fmt,
                "chunks": len(records),
            },
        )
        return {
            "doc_id": doc_id,
            "kind": kind,
            "language": normalized.language,
            "chunks": len(records),
        }

    def run_assessment(self, resume_id: str, jd_id: str) -> dict:
        resume = self._document(resume_id, "resume")
        jd = self._document(jd_id, "job_description")
        matches = self._requirement_matches(jd)
        report = assess(
            resume.structured,
            jd.structured,
            matches,
            self.gateway,
            backend_id=self.config.default_backend,
            temperature=self.config.structured_temperature,
        )
        self.audit.append(
            GLOBAL_STREAM,
            "assessment_issued",
            {
                "resume_id": resume_id,
                "jd_id": jd_id,
                "assessment_digest": hashlib.sha256(
                    report.assessment_text.encode("utf-8")
                ).hexdigest(),
                "sections": sorted(report.section_scores),
            },
        )
        return {"resume_id": resume_id, "jd_id": jd_id, **report.to_dict()}

    def open_session(self, body: SessionBody) -> dict:
        if body.language not in SESSION_LANGUAGES:
            raise InvalidParams(
                f"language must be one of {SESSION_LANGUAGES}, got {body.language!r}"
            )
        resume = self._document(body.resume_id, "resume")
        jd = self._document(body.jd_id, "job_description")
        matches = self._requirement_matches(jd)
        bank = generate_bank(
            matches,
            jd.structured,
            resume.structured,
            body.role_profile,
            self.gateway,
            backend_id=self.config.default_backend,
            bank_size=self.config.bank_size,
            targets=self.config.role_targets.get(body.role_profile),
            temperature=self.config.structured_temperature,
        )
        session_id = self._next_session_id()
        state = start_session(
            resume.structured,
            jd.structured,
            bank,
            language=body.language,
            session_id=session_id,
            matches=matches,
            thresholds=self.config.followup,
            budget_seconds=self.config.session_budget_seconds(),
            buffer_capacity=self.config.buffer_capacity,
            now=self.clock,
        )
        self.sessions[session_id] = _SessionEntry(state, matches)
        self.audit.append(
            session_id,
            "bank_generated",
            {
                "session_template_id": bank.session_template_id,
                "bank_size": len(bank.items),
                "type_distribution": dict(bank.type_distribution),
                "role_profile": body.role_profile,
            },
        )
        greeting = state.transcript[0]
        self.audit.append(session_id, "turn", greeting.to_dict())
        return {
            "session_id": session_id,
            "first_question": greeting.text,
            "bank_size": len(bank.items),
        }

    def handle_turn(self, session_id: str, message: dict) -> dict:
        """One WS exchange: candidate message in, interviewer reply out."""
        entry = self._session(session_id)
        with entry.lock:
            state = entry.state
            mtype = message.get("type")
            want_audio = mtype == "audio"
            if mtype == "utterance":
                text = str(message.get("text", ""))
            elif mtype == "audio":
                wav = base64.b64decode(str(message.get("wav", "")))
                audio = wav_bytes_to_audio(wav, language_hint=state.language)
                text = transcribe(audio, self.stt).text
            else:
                raise InvalidParams(f"unknown message type {mtype!r}")

            ingest_candidate(state, text, now=self.clock)
            self.audit.append(session_id, "turn", state.transcript[-1].to_dict())
            decision = decide_next(state)
            reply_text, _ = interviewer_reply(
                state,
                decision,
                self.gateway,
                backend_id=self.config.default_backend,
                temperature=self.config.live_temperature,
                now=self.clock,
            )
            record = state.decision_log[-1]
            self.audit.append(
                session_id,
                "decision",
                {
                    "exchange_index": record.exchange_index,
                    "question_id": record.question_id,
                    **record.decision.to_dict(),
                },
            )
            reply_turn = state.transcript[-1]
            self.audit.append(session_id, "turn", reply_turn.to_dict())

            payload = {
                "type": "reply",
                "text": reply_text,
                "exchange_index": reply_turn.exchange_index,
                "action": decision.action,
            }
            if want_audio:
                spoken = synthesize(
                    reply_text, state.language, self.config.tts_voice, self.tts
                )
                payload["audio"] = base64.b64encode(
                    audio_to_wav_bytes(spoken)
                ).decode("ascii")
            return payload

    def add_feedback(self, session_id: str, body: FeedbackBody) -> None:
        entry = self._session(session_id)
        with entry.lock:
            record_feedback(entry.state, body.exchange_index, body.value, now=self.clock)
            self.audit.append(
                session_id,
                "feedback",
                {"exchange_index": body.exchange_index, "value": body.value},
            )

    def get_report(self, session_id: str) -> dict:
        entry = self._session(session_id)
        with entry.lock:
            first_issue = entry.state.final_report is None
            report = session_report(entry.state)
            if first_issue:
                self.audit.append(
                    session_id,
                    "report_issued",
                    {
                        "session_id": session_id,
                        "ux": report["ux"],
                        "questions_asked": sum(
                            1 for q in report["questions"] if q["asked"]
                        ),
                    },
                )
            return report

    def raise_contest(self, session_id: str, body: ContestBody) -> dict:
        entry = self._session(session_id)
        with entry.lock:
            if not entry.state.exchange_exists(body.exchange_index):
                raise HTTPException(
                    status_code=404,
                    detail=f"session {session_id!r} has no exchange {body.exchange_index}",
                )
            ticket_id = self._next_ticket_id()
            ticket = {
                "ticket_id": ticket_id,
                "session_id": session_id,
                "exchange_index": body.exchange_index,
                "reason": body.reason,
                "status": "open",
                "raised_at": self.clock(),
            }
            self.tickets[ticket_id] = ticket
            self.audit.append(
                session_id,
                "contest_raised",
                {
                    "ticket_id": ticket_id,
                    "exchange_index": body.exchange_index,
                    "reason": body.reason,
                },
            )
            return {"ticket_id": ticket_id}

    def run_search(self, body: SearchBody) -> dict:
        threshold = (
            body.threshold
            if body.threshold is not None
            else self.config.similarity_threshold
        )
        query = embed(body.query, self.embedder)
        hits = self.index.search(query, k=body.k, threshold=threshold)
        return {
            "results": [
                {
                    "chunk_id": hit.chunk_id,
                    "doc_id": hit.chunk_id.rsplit(":", 1)[0],
                    "score": hit.score,
                    "text": hit.text,
                }
                for hit in hits
            ]
        }


def _sniff_format(filename: str, content: bytes) -> str:
    name = (filename or "").casefold()
    if name.endswith(".pdf") or content[:5] == b"%PDF-":
        return "pdf"
    if name.endswith((".md", ".markdown")):
        return "markdown"
    return "plain_text"


def create_app(
    config: ServiceConfig | None = None,
    use_mock: bool = False,
    clock: Callable[[], float] = time.time,
    audit: AuditLog | None = None,
) -> FastAPI:
    runtime = ServiceRuntime(config=config, use_mock=use_mock, clock=clock, audit=audit)

    def require_auth(request: Request) -> None:
        env = runtime.config.auth_token_env
        if not env:
            return
        expected = os.environ.get(env, "")
        supplied = request.headers.get("authorization", "")
        if not expected or supplied != f"Bearer {expected}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    app = FastAPI(title="interviewkit")
    app.state.runtime = runtime
    # websockets cannot resolve a Request dependency; they check auth inline
    http = APIRouter(dependencies=[Depends(require_auth)])

    @http.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "backends": runtime.gateway.backend_ids()}

    @http.post("/documents")
    def post_document(
        file: UploadFile,
        kind: str = Form(...),
        language: str = Form("auto"),
    ) -> dict:
        content = file.file.read()
        if len(content) > runtime.config.max_upload_bytes:
            raise HTTPException(
                status_code=413,
                detail=f"upload exceeds {runtime.config.max_upload_bytes} bytes",
            )
        try:
            return runtime.ingest_document(content, file.filename or "", kind, language)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except InterviewKitError as exc:
            _raise_http(exc)

    @http.post("/assessments")
    def post_assessment(body: AssessmentBody) -> dict:
        try:
            return runtime.run_assessment(body.resume_id, body.jd_id)
        except InterviewKitError as exc:
            _raise_http(exc)

    @http.post("/sessions")
    def post_session(body: SessionBody) -> dict:
        try:
            return runtime.open_session(body)
        except InterviewKitError as exc:
            _raise_http(exc)

    @http.post("/sessions/{session_id}/feedback", status_code=204)
    def post_feedback(session_id: str, body: FeedbackBody) -> Response:
        try:
            runtime.add_feedback(session_id, body)
        except InterviewKitError as exc:
            _raise_http(exc)
        return Response(status_code=204)

    @http.get("/sessions/{session_id}/report")
    def get_report(session_id: str) -> dict:
        try:
            return runtime.get_report(session_id)
        except InterviewKitError as exc:
            _raise_http(exc)

    @http.post("/sessions/{session_id}/contest")
    def post_contest(session_id: str, body: ContestBody) -> dict:
        try:
            return runtime.raise_contest(session_id, body)
        except InterviewKitError as exc:
            _raise_http(exc)

    @http.get("/tickets/{ticket_id}")
    def get_ticket(ticket_id: str) -> dict:
        ticket = runtime.tickets.get(ticket_id)
        if ticket is None:
            raise HTTPException(status_code=404, detail=f"unknown ticket {ticket_id!r}")
        return ticket

    @http.get("/audit/{stream_id}")
    def get_audit(stream_id: str) -> dict:
        events = runtime.audit.events(stream_id)
        if not events and stream_id != GLOBAL_STREAM:
            raise HTTPException(status_code=404, detail=f"no audit stream {stream_id!r}")
        return {"events": [e.to_dict() for e in events]}

    @http.post("/search")
    def post_search(body: SearchBody) -> dict:
        try:
            return runtime.run_search(body)
        except InterviewKitError as exc:
            _raise_http(exc)

    @app.websocket("/sessions/{session_id}/stream")
    async def session_stream(websocket: WebSocket, session_id: str) -> None:
        env = runtime.config.auth_token_env
        # close codes only reach real clients on accepted connections
        await websocket.accept()
        if env:
            expected = os.environ.get(env, "")
            supplied = websocket.headers.get("authorization", "")
            if not expected or supplied != f"Bearer {expected}":
                await websocket.close(code=WS_CLOSE_UNAUTHORIZED)
                return
        if session_id not in runtime.sessions:
            await websocket.close(code=WS_CLOSE_NOT_FOUND)
            return
        while True:
            try:
                message = await websocket.receive_json()
            except WebSocketDisconnect:
                return
            try:
                reply = await run_in_threadpool(runtime.handle_turn, session_id, message)
            except SessionClosed:
                await websocket.close(code=WS_CLOSE_SESSION_CLOSED)
                return
            except OutOfTurn:
                await websocket.close(code=WS_CLOSE_OUT_OF_TURN)
                return
            except _BAD_GATEWAY:
                await websocket.close(code=WS_CLOSE_BACKEND_FAILED)
                return
            except (InterviewKitError, ValueError):
                await websocket.close(code=1003)
                return
            await websocket.send_json(reply)

    app.include_router(http)
    return app
