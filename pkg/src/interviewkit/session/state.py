"""Interview session state: turns, the rolling buffer, and phases.

Turn order is the load-bearing invariant — interviewer and candidate strictly
alternate, interviewer first — so every mutation runs through guarded
methods. The buffer evicts whole exchanges (interviewer + candidate pairs)
from the front, never splitting one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..config import FollowupThresholds
from ..errors import InvalidParams, OutOfTurn
from ..metrics.core import FeedbackEvent
from ..questions import QuestionBank

INTERVIEWER = "interviewer"
CANDIDATE = "candidate"

PHASES = ("created", "running", "closing", "closed")
_PHASE_RANK = {p: i for i, p in enumerate(PHASES)}

ACTIONS = ("follow_up", "next_topic", "close")


@dataclass(frozen=True)
class Turn:
    speaker: str
    text: str
    timestamp: float
    exchange_index: int

    def __post_init__(self):
        if self.speaker not in (INTERVIEWER, CANDIDATE):
            raise InvalidParams(f"unknown speaker {self.speaker!r}")
        if not self.text:
            raise InvalidParams("turn text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "speaker": self.speaker,
            "text": self.text,
            "timestamp": self.timestamp,
            "exchange_index": self.exchange_index,
        }


class ConversationBuffer:
    """Rolling window of recent turns, evicted in exchange pairs."""

    def __init__(self, max_turns: int = 20):
        if max_turns < 2:
            raise InvalidParams("buffer needs room for at least one exchange")
        self.max_turns = max_turns
        self.turns: list[Turn] = []

    def __len__(self) -> int:
        return len(self.turns)

    def append(self, turn: Turn) -> None:
        self.turns.append(turn)
        while len(self.turns) > self.max_turns:
            del self.turns[:2]

    def last_speaker(self) -> str | None:
        return self.turns[-1].speaker if self.turns else None


@dataclass(frozen=True)
class DecisionFeatures:
    response_tokens: int
    keyword_coverage: float
    competency_signal: float

    def __post_init__(self):
        if self.response_tokens < 0:
            raise InvalidParams("response_tokens must be >= 0")
        for name in ("keyword_coverage", "competency_signal"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParams(f"{name}={value} outside [0, 1]")


@dataclass(frozen=True)
class FollowupDecision:
    action: str
    rationale: str
    features: DecisionFeatures

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise InvalidParams(f"unknown action {self.action!r}")

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "rationale": self.rationale,
            "features": {
                "response_tokens": self.features.response_tokens,
                "keyword_coverage": self.features.keyword_coverage,
                "competency_signal": self.features.competency_signal,
            },
        }


@dataclass
class DecisionRecord:
    """One logged decision: which question it judged and what came of it."""

    exchange_index: int
    question_id: str
    decision: FollowupDecision


@dataclass
class SessionState:
    """Mutable state for one live interview.

    Operations in :mod:`interviewkit.session.engine` are the only intended
    mutators; a single session is owned by one logical caller at a time.
    """

    session_id: str
    bank: QuestionBank
    language: str
    started_at: float
    thresholds: FollowupThresholds = field(default_factory=FollowupThresholds)
    budget_seconds: float = 900.0
    grounding: str = ""
    resume_doc_id: str = ""
    jd_doc_id: str = ""

    phase: str = "created"
    asked: set[str] = field(default_factory=set)
    current_question: str | None = None
    buffer: ConversationBuffer = field(default_factory=ConversationBuffer)
    transcript: list[Turn] = field(default_factory=list)
    feedback: list[FeedbackEvent] = field(default_factory=list)
    followups_used: dict[str, int] = field(default_factory=dict)
    decision_log: list[DecisionRecord] = field(default_factory=list)
    interviewer_turns: int = 0
    final_report: dict | None = None

    def advance_phase(self, phase: str) -> None:
        if _PHASE_RANK[phase] < _PHASE_RANK[self.phase]:
            raise InvalidParams(
                f"phase may only move forward ({self.phase} -> {phase})"
            )
        self.phase = phase

    def question_by_id(self, question_id: str):
        for item in self.bank.items:
            if item.id == question_id:
                return item
        return None

    def next_unasked(self):
        for item in self.bank.items:
            if item.id not in self.asked:
                return item
        return None

    def append_turn(self, speaker: str, text: str, timestamp: float) -> Turn:
        last = self.transcript[-1].speaker if self.transcript else None
        if speaker == last:
            raise OutOfTurn(f"two consecutive {speaker} turns")
        if last is None and speaker != INTERVIEWER:
            raise OutOfTurn("sessions must open with an interviewer turn")
        if speaker == INTERVIEWER:
            exchange = self.interviewer_turns
            self.interviewer_turns += 1
        else:
            exchange = self.interviewer_turns - 1
        turn = Turn(
            speaker=speaker, text=text, timestamp=timestamp, exchange_index=exchange
        )
        self.transcript.append(turn)
        self.buffer.append(turn)
        return turn

    def last_turn(self) -> Turn | None:
        return self.transcript[-1] if self.transcript else None

    def exchange_exists(self, exchange_index: int) -> bool:
        return 0 <= exchange_index < self.interviewer_turns
