"""Session engine tests: turn order, decision policy, replay, reporting."""
import pytest

from interviewkit.config import BackendConfig, FollowupThresholds
from interviewkit.documents import Section, StructuredDoc, sections_to_markdown
from interviewkit.errors import (
    BackendUnavailable,
    DuplicateFeedback,
    InvalidParams,
    LlmFailure,
    OutOfTurn,
    SessionClosed,
    SessionStillRunning,
    UnknownExchange,
)
from interviewkit.llm import LlmGateway, MockChatBackend
from interviewkit.questions import QUESTION_TYPES, QuestionBank, QuestionItem
from interviewkit.session import (
    ConversationBuffer,
    SessionState,
    Turn,
    decide_next,
    ingest_candidate,
    interviewer_reply,
    keyword_coverage,
    record_feedback,
    session_report,
    start_session,
)

from conftest import StepClock, make_mock_gateway

TOPICS = [
    "caching", "kubernetes", "latency", "mentoring", "postmortems", "terraform",
    "python", "golang", "testing", "security", "scaling", "oncall",
]


def _structured(doc_id: str) -> StructuredDoc:
    sections = (Section(heading="Body", body=f"content of {doc_id}"),)
    return StructuredDoc(
        doc_id=doc_id, markdown=sections_to_markdown(sections), sections=sections
    )


def _bank(n: int) -> QuestionBank:
    items = tuple(
        QuestionItem(
            id=f"q{i + 1:02d}",
            text=f"Describe a project where you used {TOPICS[i]} with your team.",
            competency_areas=("collaboration", TOPICS[i]),
            difficulty="medium",
            qtype=QUESTION_TYPES[i % 3],
        )
        for i in range(n)
    )
    return QuestionBank(session_template_id="qb-fixed", items=items)


def _session(n_questions: int = 12, clock=None, **kwargs) -> SessionState:
    clock = clock or StepClock()
    return start_session(
        _structured("resume1"),
        _structured("jd1"),
        _bank(n_questions),
        session_id="s-test",
        now=clock,
        **kwargs,
    )


def _good(question: QuestionItem) -> str:
    return (
        " ".join(question.competency_areas)
        + " I structured the work, aligned the team, measured outcomes, and"
        " shipped improvements across several quarters with clear results."
    )


LOW_COVERAGE = (
    "I would rather describe my weekend plans involving hiking and photography"
    " with friends around the lake for several relaxing hours."
)


def _exchange(state, answer, gw, clock):
    ingest_candidate(state, answer, now=clock)
    decision = decide_next(state)
    text, state = interviewer_reply(state, decision, gw, now=clock)
    return decision, text


# ---------------------------------------------------------------- opening


def test_start_session_greets_with_first_question():
    state = _session()
    assert state.phase == "running"
    assert state.current_question == "q01"
    assert state.asked == {"q01"}
    opening = state.transcript[0]
    assert opening.speaker == "interviewer"
    assert opening.exchange_index == 0
    assert state.bank.items[0].text in opening.text


def test_start_session_japanese_greeting():
    state = _session(language="ja")
    assert "模擬面接" in state.transcript[0].text
    assert state.bank.items[0].text in state.transcript[0].text


# ---------------------------------------------------------------- turn order


def test_candidate_cannot_speak_twice():
    clock = StepClock()
    state = _session(clock=clock)
    ingest_candidate(state, "First answer about collaboration.", now=clock)
    with pytest.raises(OutOfTurn):
        ingest_candidate(state, "Second answer in a row.", now=clock)


def test_decide_needs_a_candidate_answer():
    state = _session()
    with pytest.raises(OutOfTurn):
        decide_next(state)


def test_reply_needs_a_candidate_answer():
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(clock=clock)
    ingest_candidate(state, _good(state.bank.items[0]), now=clock)
    decision = decide_next(state)
    interviewer_reply(state, decision, gw, now=clock)
    with pytest.raises(OutOfTurn):
        interviewer_reply(state, decision, gw, now=clock)


def test_turn_text_must_be_non_empty():
    with pytest.raises(InvalidParams):
        Turn(speaker="candidate", text="", timestamp=0.0, exchange_index=0)


def test_exchange_indices_follow_interviewer_turns():
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(clock=clock)
    _exchange(state, _good(state.bank.items[0]), gw, clock)
    _exchange(state, _good(state.bank.items[1]), gw, clock)
    indices = [(t.speaker, t.exchange_index) for t in state.transcript]
    assert indices == [
        ("interviewer", 0),
        ("candidate", 0),
        ("interviewer", 1),
        ("candidate", 1),
        ("interviewer", 2),
    ]


def test_phase_never_moves_backward():
    state = _session()
    with pytest.raises(InvalidParams):
        state.advance_phase("created")


# ---------------------------------------------------------------- decision policy


def test_short_answer_forces_follow_up_even_with_full_coverage():
    clock = StepClock()
    state = _session(clock=clock)
    q = state.bank.items[0]
    assert keyword_coverage(" ".join(q.competency_areas), q, "en") == 1.0
    ingest_candidate(state, " ".join(q.competency_areas), now=clock)
    decision = decide_next(state)
    assert decision.action == "follow_up"
    assert "token floor" in decision.rationale
    assert decision.features.keyword_coverage == 1.0


def test_high_coverage_long_answer_moves_on():
    clock = StepClock()
    state = _session(clock=clock)
    ingest_candidate(state, _good(state.bank.items[0]), now=clock)
    decision = decide_next(state)
    assert decision.action == "next_topic"
    assert decision.features.keyword_coverage == 1.0
    assert decision.features.response_tokens >= 15


def test_low_coverage_long_answer_follows_up():
    clock = StepClock()
    state = _session(clock=clock)
    ingest_candidate(state, LOW_COVERAGE, now=clock)
    decision = decide_next(state)
    assert decision.action == "follow_up"
    assert decision.features.keyword_coverage < 0.3


def test_mid_coverage_long_answer_follows_up():
    clock = StepClock()
    state = _session(clock=clock)
    answer = "collaboration " + LOW_COVERAGE
    ingest_candidate(state, answer, now=clock)
    decision = decide_next(state)
    assert decision.features.keyword_coverage == 0.5
    assert decision.action == "follow_up"
    assert "between the follow-up bounds" in decision.rationale


def test_follow_up_cap_forces_transition():
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(clock=clock)
    first, _ = _exchange(state, LOW_COVERAGE, gw, clock)
    assert first.action == "follow_up"
    assert state.followups_used == {"q01": 1}
    second, reply = _exchange(state, LOW_COVERAGE, gw, clock)
    assert second.action == "next_topic"
    assert "follow-up cap reached" in second.rationale
    assert state.current_question == "q02"
    assert state.bank.items[1].text in reply


def test_time_budget_closes_session():
    clock = StepClock()
    state = _session(clock=clock, budget_seconds=0.5)
    ingest_candidate(state, _good(state.bank.items[0]), now=clock)
    decision = decide_next(state)
    assert decision.action == "close"
    assert decision.rationale.startswith("time budget spent")


def test_exhausted_bank_closes_on_forward_move():
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(n_questions=1, clock=clock)
    decision, reply = _exchange(state, _good(state.bank.items[0]), gw, clock)
    assert decision.action == "close"
    assert "question bank exhausted" in decision.rationale
    assert state.phase == "closing"
    assert "practice interview" in reply
    with pytest.raises(SessionClosed):
        ingest_candidate(state, "one more thing", now=clock)


def test_decide_next_is_pure():
    clock = StepClock()
    state = _session(clock=clock)
    ingest_candidate(state, _good(state.bank.items[0]), now=clock)
    before = (len(state.transcript), dict(state.followups_used), set(state.asked))
    one = decide_next(state)
    two = decide_next(state)
    assert one == two
    assert (len(state.transcript), dict(state.followups_used), set(state.asked)) == before


# ---------------------------------------------------------------- full sessions


def _run_full_session(n: int = 12):
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(n_questions=n, clock=clock)
    decisions = []
    for _ in range(n):
        question = state.question_by_id(state.current_question)
        decision, _ = _exchange(state, _good(question), gw, clock)
        decisions.append(decision)
    return state, decisions


def test_twelve_questions_without_followups_take_twelve_decisions():
    state, decisions = _run_full_session(12)
    assert [d.action for d in decisions] == ["next_topic"] * 11 + ["close"]
    assert state.asked == {f"q{i:02d}" for i in range(1, 13)}
    assert state.followups_used == {}
    assert len(state.decision_log) == 12
    assert state.phase == "closing"


def test_next_topic_reply_quotes_question_verbatim():
    clock = StepClock()
    gw = make_mock_gateway()
    state = _session(clock=clock)
    _, reply = _exchange(state, _good(state.bank.items[0]), gw, clock)
    assert reply.endswith(state.bank.items[1].text)


def test_replay_with_same_inputs_is_identical():
    state_a, decisions_a = _run_full_session(12)
    state_b, decisions_b = _run_full_session(12)
    assert [d.to_dict() for d in decisions_a] == [d.to_dict() for d in decisions_b]
    assert [t.to_dict() for t in state_a.transcript] == [
        t.to_dict() for t in state_b.transcript
    ]
    assert session_report(state_a) == session_report(state_b)


# ---------------------------------------------------------------- buffer


def test_buffer_evicts_whole_exchanges():
    buf = ConversationBuffer(max_turns=4)
    turns = [
        Turn(speaker="interviewer" if i % 2 == 0 else "candidate",
             text=f"t{i}", timestamp=float(i), exchange_index=i // 2)
        for i in range(5)
    ]
    for t in turns:
        buf.append(t)
    assert [t.text for t in buf.turns] == ["t2", "t3", "t4"]
    assert buf.last_speaker() == "interviewer"


def test_buffer_requires_room_for_an_exchange():
    with pytest.raises(InvalidParams):
        ConversationBuffer(max_turns=1)


def test_session_buffer_trims_but_transcript_keeps_everything():
    state, _ = _run_full_session(12)
    assert len(state.transcript) == 25
    assert len(state.buffer.turns) == 19
    assert state.buffer.turns == state.transcript[6:]
    assert state.buffer.turns[0].speaker == "interviewer"


# ---------------------------------------------------------------- feedback


def test_feedback_records_and_rejects_duplicates():
    clock = StepClock()
    state = _session(clock=clock)
    record_feedback(state, 0, 1, now=clock)
    with pytest.raises(DuplicateFeedback):
        record_feedback(state, 0, -1, now=clock)
    assert [e.value for e in state.feedback] == [1]


def test_feedback_unknown_exchange():
    state = _session()
    with pytest.raises(UnknownExchange):
        record_feedback(state, 99, 1)


def test_feedback_validates_value():
    state = _session()
    with pytest.raises(InvalidParams):
        record_feedback(state, 0, 2)


def test_feedback_allowed_while_closing_but_not_after_report():
    state, _ = _run_full_session(12)
    assert state.phase == "closing"
    record_feedback(state, 3, 1)
    session_report(state)
    assert state.phase == "closed"
    with pytest.raises(SessionClosed):
        record_feedback(state, 4, 1)


# ---------------------------------------------------------------- report


def test_report_requires_closed_session():
    state = _session()
    with pytest.raises(SessionStillRunning):
        session_report(state)


def test_report_contents_and_idempotence():
    state, _ = _run_full_session(12)
    record_feedback(state, 0, 1)
    record_feedback(state, 1, 1)
    record_feedback(state, 2, -1)
    report = session_report(state)
    assert report["session_id"] == "s-test"
    assert report["ux"] == pytest.approx(1 / 3, abs=1e-9)
    assert len(report["transcript"]) == 25
    assert len(report["decisions"]) == 12
    assert all(q["asked"] for q in report["questions"])
    assert all(q["coverage"] == 1.0 for q in report["questions"])
    assert all(q["followups"] == 0 for q in report["questions"])
    assert report["duration_seconds"] > 0
    assert session_report(state) is report


def test_report_without_feedback_has_null_ux():
    state, _ = _run_full_session(3)
    assert session_report(state)["ux"] is None


# ---------------------------------------------------------------- llm failures


def test_reply_maps_transport_errors():
    clock = StepClock()
    gw = LlmGateway(retries=0, sleep=lambda s: None)
    gw.register_backend(
        BackendConfig(backend_id="mock"),
        transport=MockChatBackend(script=[BackendUnavailable("down")]),
    )
    state = _session(clock=clock)
    ingest_candidate(state, _good(state.bank.items[0]), now=clock)
    decision = decide_next(state)
    with pytest.raises(LlmFailure) as err:
        interviewer_reply(state, decision, gw, now=clock)
    assert err.value.retryable is True
