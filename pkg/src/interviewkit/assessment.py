"""Resume assessment against a job description.

The LLM receives both structured documents plus the retrieved
requirement/evidence matches as grounding, and must answer with a single
JSON object. Parsing is strict: one repair retry with an explicit
JSON-only reminder, then SchemaViolation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import jsonschema

from .documents.types import StructuredDoc
from .errors import SchemaViolation
from .index.store import MatchPair
from .llm.gateway import ChatRequest, LlmGateway
from .llm.structured import complete_with_repair, extract_json_object

REPORT_VERSION = 1

ASSESSMENT_SYSTEM_PROMPT = (
    "You are a rigorous hiring reviewer. You ground every judgement in the "
    "provided documents and answer in machine-readable JSON."
)

ASSESSMENT_PROMPT = """\
Evaluate how well the candidate resume below fits the job description. Work
section by section through the resume.

Respond with ONE JSON object and nothing else, using exactly these keys:
- "assessment_text": a thorough prose evaluation covering strengths, gaps, \
and overall fit, written in the job description's language.
- "section_scores": an object mapping EVERY resume section name listed below \
to an alignment score between 0.0 and 1.0.
- "section_feedback": an object mapping the same section names to one or two \
sentences of concrete feedback.
- "recommendations": an array of specific resume-improvement suggestions, \
ordered by impact.

Resume sections to score: {section_names}

JOB DESCRIPTION MARKDOWN:
<<<
{jd_markdown}
>>>

RESUME MARKDOWN:
<<<
{resume_markdown}
>>>

RETRIEVED MATCHES (requirement excerpt -> supporting resume excerpts with
cosine scores; use these as evidence):
<<<
{matches_block}
>>>
"""

REPAIR_SUFFIX = (
    "Your previous reply could not be parsed. Respond again with valid JSON "
    "only: one object with keys assessment_text, section_scores, "
    "section_feedback, recommendations. No prose outside the JSON."
)

_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "assessment_text",
        "section_scores",
        "section_feedback",
        "recommendations",
    ],
    "properties": {
        "assessment_text": {"type": "string", "minLength": 1},
        "section_scores": {
            "type": "object",
            "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
        },
        "section_feedback": {
            "type": "object",
            "additionalProperties": {"type": "string"},
        },
        "recommendations": {"type": "array", "items": {"type": "string"}},
    },
}


@dataclass(frozen=True)
class AssessmentReport:
    """Section-wise resume evaluation with scores in [0,1]."""

    assessment_text: str
    section_scores: dict[str, float]
    section_feedback: dict[str, str]
    recommendations: list[str]
    report_version: int = REPORT_VERSION

    def __post_init__(self):
        if not self.assessment_text:
            raise SchemaViolation("assessment_text must be non-empty")
        for section, score in self.section_scores.items():
            if not 0.0 <= float(score) <= 1.0:
                raise SchemaViolation(
                    f"score for section {section!r} is {score}, outside [0,1]"
                )

    def to_dict(self) -> dict:
        return {
            "report_version": self.report_version,
            "assessment_text": self.assessment_text,
            "section_scores": dict(self.section_scores),
            "section_feedback": dict(self.section_feedback),
            "recommendations": list(self.recommendations),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssessmentReport":
        return cls(
            assessment_text=data["assessment_text"],
            section_scores={k: float(v) for k, v in data["section_scores"].items()},
            section_feedback=dict(data["section_feedback"]),
            recommendations=list(data["recommendations"]),
            report_version=int(data.get("report_version", REPORT_VERSION)),
        )


def _matches_block(matches: list[MatchPair]) -> str:
    if not matches:
        return "(no retrieval matches available)"
    lines = []
    for pair in matches:
        requirement = " ".join(pair.requirement_chunk.text.split())
        lines.append(f"- requirement: {requirement}")
        if not pair.evidence:
            lines.append("  evidence: (nothing above threshold)")
        for hit in pair.evidence:
            excerpt = " ".join(hit.text.split())
            lines.append(f"  evidence (score {hit.score:.3f}): {excerpt}")
    return "\n".join(lines)


def scoreable_sections(resume: StructuredDoc) -> list[str]:
    """Resume headings the report must cover (the unnamed preamble is not
    a scoreable section)."""
    return [h for h in resume.section_headings() if h]


def build_assessment_prompt(
    resume: StructuredDoc, jd: StructuredDoc, matches: list[MatchPair]
) -> str:
    sections = scoreable_sections(resume)
    return ASSESSMENT_PROMPT.format(
        section_names=json.dumps(sections, ensure_ascii=False),
        jd_markdown=jd.markdown,
        resume_markdown=resume.markdown,
        matches_block=_matches_block(matches),
    )


def _parse_report(text: str, required_sections: list[str]) -> AssessmentReport:
    data = extract_json_object(text)
    try:
        jsonschema.validate(data, _REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValueError(f"report JSON violates schema: {exc.message}") from exc
    missing = [
        s
        for s in required_sections
        if s not in data["section_scores"] or s not in data["section_feedback"]
    ]
    if missing:
        raise ValueError(f"report omits resume sections: {missing}")
    return AssessmentReport(
        assessment_text=data["assessment_text"],
        section_scores={k: float(v) for k, v in data["section_scores"].items()},
        section_feedback=dict(data["section_feedback"]),
        recommendations=[str(r) for r in data["recommendations"]],
    )


def assess(
    resume: StructuredDoc,
    jd: StructuredDoc,
    matches: list[MatchPair],
    llm: LlmGateway,
    backend_id: str = "mock",
    temperature: float = 0.2,
) -> AssessmentReport:
    """Generate and parse the assessment report."""
    prompt = build_assessment_prompt(resume, jd, matches)
    sections = scoreable_sections(resume)
    request = ChatRequest(
        backend_id=backend_id,
        system_prompt=ASSESSMENT_SYSTEM_PROMPT,
        messages=(("user", prompt),),
        temperature=temperature,
        cache_eligible=True,
    )
    report, _ = complete_with_repair(
        llm, request, lambda text: _parse_report(text, sections), REPAIR_SUFFIX
    )
    return report
