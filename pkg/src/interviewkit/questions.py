"""Question bank generation and type balancing.

The LLM is asked for a JSON object with one "questions" array; items are
validated against the published schema (closed difficulty/qtype enums,
non-empty competency areas) and evidence ids must come from the retrieval
matches handed to the generator. Banks are ordered easy → hard.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .config import DEFAULT_ROLE_TARGETS
from .documents.types import StructuredDoc
from .errors import InsufficientItems, InvalidParams, SchemaViolation
from .index.store import MatchPair
from .llm.gateway import ChatRequest, LlmGateway
from .llm.structured import complete_with_repair, extract_json_object

DIFFICULTIES = ("easy", "medium", "hard")
QUESTION_TYPES = ("behavioral", "technical", "situational")
ROLE_PROFILES = tuple(sorted(DEFAULT_ROLE_TARGETS))
BANK_SCHEMA_VERSION = 1

_DIFFICULTY_RANK = {d: i for i, d in enumerate(DIFFICULTIES)}

with resources.files("interviewkit.schemas").joinpath(
    "question_bank.schema.json"
).open("r", encoding="utf-8") as _fh:
    BANK_SCHEMA: dict = json.load(_fh)

_ITEM_SCHEMA = {
    "definitions": BANK_SCHEMA["definitions"],
    "$ref": "#/definitions/question",
}


@dataclass(frozen=True)
class QuestionItem:
    id: str
    text: str
    competency_areas: tuple[str, ...]
    difficulty: str
    qtype: str
    evidence_chunk_ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.text:
            raise SchemaViolation("question text must be non-empty")
        if not self.competency_areas or any(not c for c in self.competency_areas):
            raise SchemaViolation("competency_areas must be non-empty strings")
        if self.difficulty not in DIFFICULTIES:
            raise SchemaViolation(f"unknown difficulty {self.difficulty!r}")
        if self.qtype not in QUESTION_TYPES:
            raise SchemaViolation(f"unknown question type {self.qtype!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "competency_areas": list(self.competency_areas),
            "difficulty": self.difficulty,
            "qtype": self.qtype,
            "evidence_chunk_ids": list(self.evidence_chunk_ids),
        }

    @classmethod
    def from_dict(cls, data: dict, fallback_id: str = "") -> "QuestionItem":
        return cls(
            id=str(data.get("id") or fallback_id),
            text=str(data["text"]),
            competency_areas=tuple(str(c) for c in data["competency_areas"]),
            difficulty=str(data["difficulty"]),
            qtype=str(data["qtype"]),
            evidence_chunk_ids=tuple(str(c) for c in data.get("evidence_chunk_ids", [])),
        )


@dataclass(frozen=True)
class QuestionBank:
    session_template_id: str
    items: tuple[QuestionItem, ...]
    type_distribution: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.items:
            raise SchemaViolation("question bank must contain at least one item")
        counted = _distribution(self.items)
        if not self.type_distribution:
            object.__setattr__(self, "type_distribution", counted)
        elif dict(self.type_distribution) != counted:
            raise SchemaViolation(
                f"type_distribution {self.type_distribution} does not match items {counted}"
            )

    def to_dict(self) -> dict:
        return {
            "schema_version": BANK_SCHEMA_VERSION,
            "session_template_id": self.session_template_id,
            "items": [item.to_dict() for item in self.items],
            "type_distribution": dict(self.type_distribution),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuestionBank":
        jsonschema.validate(data, BANK_SCHEMA)
        items = tuple(
            QuestionItem.from_dict(item, fallback_id=f"q{i + 1:02d}")
            for i, item in enumerate(data["items"])
        )
        return cls(
            session_template_id=data["session_template_id"],
            items=items,
            type_distribution={k: int(v) for k, v in data["type_distribution"].items()},
        )


def _distribution(items: tuple[QuestionItem, ...]) -> dict[str, int]:
    counts = {qtype: 0 for qtype in QUESTION_TYPES}
    for item in items:
        counts[item.qtype] += 1
    return counts


def allocate_counts(targets: dict[str, float], total: int) -> dict[str, int]:
    """Largest-remainder allocation of ``total`` items across types."""
    quotas = {t: targets.get(t, 0.0) * total for t in QUESTION_TYPES}
    counts = {t: int(quotas[t]) for t in QUESTION_TYPES}
    leftover = total - sum(counts.values())
    by_remainder = sorted(
        QUESTION_TYPES, key=lambda t: (-(quotas[t] - counts[t]), t)
    )
    for t in by_remainder[:leftover]:
        counts[t] += 1
    return counts


QUESTION_BANK_SYSTEM_PROMPT = (
    "You design interview question banks grounded in the candidate's actual "
    "background and the role's actual requirements. You answer in "
    "machine-readable JSON."
)

QUESTION_BANK_PROMPT = """\
Create a personalized interview question bank for the role below.

Respond with ONE JSON object and nothing else:
{{"questions": [{{"id": "...", "text": "...", "competency_areas": ["..."], \
"difficulty": "easy|medium|hard", "qtype": "behavioral|technical|situational", \
"evidence_chunk_ids": ["..."]}}, ...]}}

Requirements:
- Produce exactly {bank_size} questions with this type mix: {type_counts}.
- Cover easy, medium, and hard difficulties, easier questions first.
- Ground each question in the match evidence when it exists and list the
  supporting chunk ids in evidence_chunk_ids (valid ids: {valid_ids}); use []
  when a question has no direct evidence.
- Questions must be answerable in speech in one to three minutes.

JOB DESCRIPTION MARKDOWN:
<<<
{jd_markdown}
>>>

RESUME MARKDOWN:
<<<
{resume_markdown}
>>>

REQUIREMENT/EVIDENCE MATCHES:
<<<
{matches_block}
>>>
"""

BANK_REPAIR_SUFFIX = (
    "Your previous reply could not be parsed. Respond again with valid JSON "
    "only: one object with a \"questions\" array where every question has "
    "text, competency_areas, difficulty (easy|medium|hard), qtype "
    "(behavioral|technical|situational), and evidence_chunk_ids limited to "
    "the valid ids you were given. No prose outside the JSON."
)


def _matches_block(matches: list[MatchPair]) -> str:
    if not matches:
        return "(no retrieval matches; generate from the job description alone)"
    lines = []
    for pair in matches:
        requirement = " ".join(pair.requirement_chunk.text.split())
        lines.append(f"- requirement: {requirement}")
        for hit in pair.evidence:
            excerpt = " ".join(hit.text.split())
            lines.append(f"  evidence [{hit.chunk_id}] (score {hit.score:.3f}): {excerpt}")
    return "\n".join(lines)


def evidence_ids(matches: list[MatchPair]) -> frozenset[str]:
    return frozenset(hit.chunk_id for pair in matches for hit in pair.evidence)


def build_bank_prompt(
    matches: list[MatchPair],
    jd: StructuredDoc,
    resume: StructuredDoc,
    role_profile: str,
    bank_size: int,
    targets: dict[str, float],
) -> str:
    counts = allocate_counts(targets, bank_size)
    type_counts = ", ".join(f"{counts[t]} {t}" for t in QUESTION_TYPES)
    valid = sorted(evidence_ids(matches))
    return QUESTION_BANK_PROMPT.format(
        bank_size=bank_size,
        type_counts=type_counts,
        valid_ids=json.dumps(valid, ensure_ascii=False) if valid else "[]",
        jd_markdown=jd.markdown,
        resume_markdown=resume.markdown,
        matches_block=_matches_block(matches),
    )


def _parse_bank_items(
    text: str, allowed_evidence: frozenset[str]
) -> tuple[QuestionItem, ...]:
    data = extract_json_object(text)
    raw_items = data.get("questions")
    if not isinstance(raw_items, list) or not raw_items:
        raise ValueError('reply lacks a non-empty "questions" array')
    items = []
    for i, raw in enumerate(raw_items):
        try:
            jsonschema.validate(raw, _ITEM_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ValueError(f"question {i} violates the schema: {exc.message}") from exc
        item = QuestionItem.from_dict(raw, fallback_id=f"q{i + 1:02d}")
        unknown = set(item.evidence_chunk_ids) - allowed_evidence
        if unknown:
            raise ValueError(f"question {i} cites unknown chunks: {sorted(unknown)}")
        items.append(item)
    return tuple(items)


def _template_id(jd: StructuredDoc, resume: StructuredDoc, role_profile: str) -> str:
    h = hashlib.sha256(
        f"{jd.doc_id}\x00{resume.doc_id}\x00{role_profile}".encode("utf-8")
    )
    return f"qb-{h.hexdigest()[:12]}"


def generate_bank(
    matches: list[MatchPair],
    jd: StructuredDoc,
    resume: StructuredDoc,
    role_profile: str,
    llm: LlmGateway,
    backend_id: str = "mock",
    bank_size: int = 12,
    targets: dict[str, float] | None = None,
    temperature: float = 0.2,
) -> QuestionBank:
    """Generate, validate, and balance a question bank."""
    if role_profile not in DEFAULT_ROLE_TARGETS:
        raise InvalidParams(
            f"role_profile must be one of {ROLE_PROFILES}, got {role_profile!r}"
        )
    if bank_size < 1:
        raise InvalidParams("bank_size must be at least 1")
    resolved_targets = targets if targets is not None else DEFAULT_ROLE_TARGETS[role_profile]
    prompt = build_bank_prompt(matches, jd, resume, role_profile, bank_size, resolved_targets)
    request = ChatRequest(
        backend_id=backend_id,
        system_prompt=QUESTION_BANK_SYSTEM_PROMPT,
        messages=(("user", prompt),),
        temperature=temperature,
        cache_eligible=True,
    )
    allowed = evidence_ids(matches)
    items, _ = complete_with_repair(
        llm, request, lambda text: _parse_bank_items(text, allowed), BANK_REPAIR_SUFFIX
    )
    ordered = tuple(
        sorted(items, key=lambda q: _DIFFICULTY_RANK[q.difficulty])
    )
    bank = QuestionBank(
        session_template_id=_template_id(jd, resume, role_profile),
        items=ordered,
    )
    return rebalance(bank, resolved_targets)


def rebalance(bank: QuestionBank, targets: dict[str, float]) -> QuestionBank:
    """Drop surplus questions so per-type counts sit within ±1 of
    round(target × total); never reorders within a type, never invents items.

    A type with a nonzero target must keep at least one question; when that
    is impossible the bank is unsatisfiable and InsufficientItems is raised.
    """
    total_target = sum(targets.get(t, 0.0) for t in QUESTION_TYPES)
    if abs(total_target - 1.0) > 1e-9:
        raise InvalidParams(f"target fractions sum to {total_target}, expected 1")
    if any(targets.get(t, 0.0) < 0 for t in QUESTION_TYPES):
        raise InvalidParams("target fractions must be nonnegative")

    counts = _distribution(bank.items)
    required = {t for t in QUESTION_TYPES if targets.get(t, 0.0) > 0}
    missing = sorted(t for t in required if counts[t] == 0)
    if missing:
        raise InsufficientItems(
            f"no items available for required types: {missing}"
        )

    total = len(bank.items)
    rounded = {t: round(targets.get(t, 0.0) * total) for t in QUESTION_TYPES}
    if all(abs(counts[t] - rounded[t]) <= 1 for t in QUESTION_TYPES):
        return bank

    for size in range(total, 0, -1):
        want = allocate_counts(targets, size)
        if any(want[t] == 0 for t in required):
            break  # smaller sizes only get worse for required coverage
        if all(counts[t] >= want[t] for t in QUESTION_TYPES):
            kept_per_type = {t: 0 for t in QUESTION_TYPES}
            kept = []
            for item in bank.items:
                if kept_per_type[item.qtype] < want[item.qtype]:
                    kept_per_type[item.qtype] += 1
                    kept.append(item)
            return QuestionBank(
                session_template_id=bank.session_template_id,
                items=tuple(kept),
            )
    raise InsufficientItems(
        f"cannot meet targets {targets} with distribution {counts}"
    )
