"""Offline chat backend that answers every interview-pipeline prompt.

Each prompt family carries a stable marker line (document sources, the
section list to score, the bank size line, the ACTION directive), so this
backend can recognize the request, pull the real inputs back out of the
prompt, and compose a well-formed deterministic reply. That makes full
end-to-end runs (structuring -> assessment -> question bank -> live
interview) reproducible without any model server.
"""
from __future__ import annotations

import hashlib
import json
import re

from .gateway import ChatRequest, cache_key
from .mock import MockChatBackend

_RESUME_HEADINGS = ("Summary", "Experience", "Skills", "Education")
_JD_HEADINGS = ("Role Overview", "Responsibilities", "Requirements", "Team")

_DIFFICULTIES = ("easy", "medium", "hard")

_QUESTION_TEMPLATES = {
    "behavioral": (
        "Tell me about a time your work involving {topic} made a measurable "
        "difference for your team."
    ),
    "technical": (
        "Walk me through how you approach {topic} in practice, including the "
        "trade-offs you weigh."
    ),
    "situational": (
        "Imagine {topic} becomes the top priority one week before a major "
        "deadline. How do you respond?"
    ),
}

_COMPETENCY_BY_TYPE = {
    "behavioral": "collaboration",
    "technical": "engineering depth",
    "situational": "judgment under pressure",
}

_BLOCK_RE = re.compile(r"<<<\n(.*?)\n>>>", re.S)
_SECTIONS_RE = re.compile(r"Resume sections to score: (\[.*\])")
_BANK_SIZE_RE = re.compile(r"Produce exactly (\d+) questions with this type mix: ([^.\n]+)\.")
_TYPE_COUNT_RE = re.compile(r"(\d+) (\w+)")
_VALID_IDS_RE = re.compile(r"valid ids: (\[[^\]]*\])")
_NEXT_QUESTION_RE = re.compile(r"NEXT QUESTION: (.*)\Z", re.S)

_WORD_RE = re.compile(r"[^\W\d_]{5,}", re.UNICODE)

_GENERIC_TOPICS = ("the role's core responsibilities", "cross-team delivery")


def _blocks(prompt: str) -> list[str]:
    return _BLOCK_RE.findall(prompt)


def _flatten(markdown: str) -> str:
    return " ".join(re.sub(r"(?m)^#{1,6}\s*", "", markdown).split())


def _structure(source: str, headings: tuple[str, ...]) -> str:
    """Fold the raw source into canonical ## sections, content unchanged."""
    cleaned = re.sub(r"(?m)^#{1,6}\s*", "", source).strip()
    paragraphs = [p.strip() for p in re.split(r"\n\s*\n", cleaned) if p.strip()]
    if not paragraphs:
        paragraphs = ["(no content)"]
    n = min(len(headings), len(paragraphs))
    q, r = divmod(len(paragraphs), n)
    sections = []
    cursor = 0
    for i in range(n):
        size = q + 1 if i < r else q
        body = "\n\n".join(paragraphs[cursor : cursor + size])
        sections.append(f"## {headings[i]}\n\n{body}")
        cursor += size
    return "\n\n".join(sections) + "\n"


def _score_for(section: str) -> float:
    byte = hashlib.sha256(section.encode("utf-8")).digest()[0]
    return round(0.35 + 0.6 * byte / 255, 3)


def _assessment_reply(prompt: str) -> str:
    names_match = _SECTIONS_RE.search(prompt)
    names = json.loads(names_match.group(1)) if names_match else []
    blocks = _blocks(prompt)
    jd_text = _flatten(blocks[0]) if blocks else ""
    resume_text = _flatten(blocks[1]) if len(blocks) > 1 else ""
    assessment_text = (
        "Overall, the resume shows a credible fit for this role. "
        f"The position calls for the following: {jd_text} "
        f"Against that, the candidate brings: {resume_text} "
        "The strongest overlap appears in the sections scored below, and the "
        "per-section feedback calls out the remaining gaps."
    )
    return json.dumps(
        {
            "assessment_text": assessment_text,
            "section_scores": {name: _score_for(name) for name in names},
            "section_feedback": {
                name: (
                    f"The {name} section speaks to the role's needs; quantify "
                    "outcomes and mirror the posting's key terms."
                )
                for name in names
            },
            "recommendations": [
                "Mirror the job description's exact terminology for the core requirements.",
                "Quantify the impact of each listed accomplishment.",
                "Move the most role-relevant work to the top of the resume.",
            ],
        },
        ensure_ascii=False,
    )


def _topics(jd_markdown: str) -> list[str]:
    seen = []
    for word in _WORD_RE.findall(jd_markdown):
        lowered = word.casefold()
        if lowered not in seen:
            seen.append(lowered)
        if len(seen) >= 12:
            break
    return seen or list(_GENERIC_TOPICS)


def _bank_reply(prompt: str) -> str:
    size_match = _BANK_SIZE_RE.search(prompt)
    if not size_match:
        return json.dumps({"questions": []})
    total = int(size_match.group(1))
    mix = [(int(n), t) for n, t in _TYPE_COUNT_RE.findall(size_match.group(2))]
    ids_match = _VALID_IDS_RE.search(prompt)
    valid_ids = json.loads(ids_match.group(1)) if ids_match else []
    blocks = _blocks(prompt)
    topics = _topics(blocks[0]) if blocks else list(_GENERIC_TOPICS)

    questions = []
    idx = 0
    for count, qtype in mix:
        template = _QUESTION_TEMPLATES.get(qtype, _QUESTION_TEMPLATES["behavioral"])
        for _ in range(count):
            topic = topics[idx % len(topics)]
            questions.append(
                {
                    "id": f"q{idx + 1:02d}",
                    "text": template.format(topic=topic),
                    "competency_areas": [
                        _COMPETENCY_BY_TYPE.get(qtype, "communication"),
                        topic,
                    ],
                    "difficulty": _DIFFICULTIES[min(2, idx * 3 // max(total, 1))],
                    "qtype": qtype,
                    "evidence_chunk_ids": (
                        [valid_ids[idx % len(valid_ids)]] if valid_ids else []
                    ),
                }
            )
            idx += 1
    return json.dumps({"questions": questions}, ensure_ascii=False)


def _live_reply(prompt: str) -> str:
    if "ACTION: CLOSE" in prompt:
        return (
            "Thank you for your time today. That completes our practice "
            "interview; your report will be ready shortly."
        )
    if "ACTION: NEXT_TOPIC" in prompt:
        match = _NEXT_QUESTION_RE.search(prompt)
        question = match.group(1).strip() if match else "Could you tell me more?"
        return f"Thank you, that gives me a clear picture. Let's move on. {question}"
    return (
        "I'd like to go deeper on that. Can you walk me through the specific "
        "steps you took and what the measurable outcome was?"
    )


class InterviewMockBackend:
    """ChatBackend that serves the whole pipeline deterministically."""

    def __init__(self):
        self.calls: list[ChatRequest] = []

    def complete(self, req: ChatRequest, timeout: float) -> tuple[str, dict[str, int]]:
        self.calls.append(req)
        prompt = next((t for r, t in req.messages if r == "user"), "")
        text = self.reply_for(prompt) or f"mock-reply:{cache_key(req)[:16]}"
        return text, MockChatBackend._usage(req, text)

    def reply_for(self, prompt: str) -> str:
        if "RESUME SOURCE:" in prompt:
            blocks = _blocks(prompt)
            return _structure(blocks[0] if blocks else "", _RESUME_HEADINGS)
        if "JOB DESCRIPTION SOURCE:" in prompt:
            blocks = _blocks(prompt)
            return _structure(blocks[0] if blocks else "", _JD_HEADINGS)
        if "Create a personalized interview question bank" in prompt:
            return _bank_reply(prompt)
        if "Resume sections to score:" in prompt:
            return _assessment_reply(prompt)
        if "ACTION:" in prompt:
            return _live_reply(prompt)
        return ""
