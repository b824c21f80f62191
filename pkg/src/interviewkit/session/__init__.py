"""Live interview session state machine and report."""
from .engine import (
    build_reply_prompt,
    decide_next,
    ingest_candidate,
    interviewer_reply,
    keyword_coverage,
    record_feedback,
    session_report,
    start_session,
)
from .state import (
    ACTIONS,
    CANDIDATE,
    INTERVIEWER,
    PHASES,
    ConversationBuffer,
    DecisionFeatures,
    DecisionRecord,
    FollowupDecision,
    SessionState,
    Turn,
)

__all__ = [
    "ACTIONS",
    "CANDIDATE",
    "ConversationBuffer",
    "DecisionFeatures",
    "DecisionRecord",
    "FollowupDecision",
    "INTERVIEWER",
    "PHASES",
    "SessionState",
    "Turn",
    "build_reply_prompt",
    "decide_next",
    "ingest_candidate",
    "interviewer_reply",
    "keyword_coverage",
    "record_feedback",
    "session_report",
    "start_session",
]
