"""LLM-backed conversion of raw document text into structured Markdown.

The prompts pin a machine-checkable output contract (ATX headings, no
commentary) so the section parser below can be strict. Parsing tolerates any
heading level and fenced code blocks; it rejects output with no headings.
"""
from __future__ import annotations

import re

from ..errors import InvalidParams, UnparseableMarkdown
from ..llm.gateway import ChatRequest, LlmGateway
from .types import DOC_KINDS, NormalizedText, Section, StructuredDoc

STRUCTURING_SYSTEM_PROMPT = (
    "You convert hiring documents into clean, structured Markdown. "
    "You never invent facts and never drop facts."
)

RESUME_STRUCTURING_PROMPT = """\
Convert the candidate resume below into structured Markdown.

Rules:
- Organize the content under '## ' headings such as Summary, Skills, \
Experience, Education, and Certifications, keeping only headings that the \
source supports.
- Preserve every fact from the source text; do not invent, summarize away, \
or reorder dates, employers, titles, or skills.
- Use bullet lists for enumerations; keep names, dates, and numbers verbatim.
- Respond with Markdown only: no preamble, no commentary, no code fences.

RESUME SOURCE:
<<<
{content}
>>>
"""

JOB_DESCRIPTION_STRUCTURING_PROMPT = """\
Convert the job description below into structured Markdown.

Rules:
- Organize the content under '## ' headings such as Role, Responsibilities, \
Requirements, Nice to Have, and Compensation, keeping only headings that the \
source supports.
- Preserve every stated requirement and responsibility; do not invent or \
drop any.
- Use bullet lists for enumerations; keep titles, skills, and numbers \
verbatim.
- Respond with Markdown only: no preamble, no commentary, no code fences.

JOB DESCRIPTION SOURCE:
<<<
{content}
>>>
"""

_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*?)\s*#*\s*$")
_FENCE_RE = re.compile(r"^(```|~~~)")


def build_structuring_prompt(kind: str, content: str) -> str:
    if kind == "resume":
        return RESUME_STRUCTURING_PROMPT.format(content=content)
    if kind == "job_description":
        return JOB_DESCRIPTION_STRUCTURING_PROMPT.format(content=content)
    raise InvalidParams(f"kind must be one of {sorted(DOC_KINDS)}, got {kind!r}")


def parse_sections(markdown: str) -> tuple[Section, ...]:
    """Split Markdown into (heading, body) sections.

    Any ATX heading level starts a section; text before the first heading
    becomes a section with an empty heading. Duplicate headings get a
    numeric suffix so headings stay unique. Raises UnparseableMarkdown when
    no headings are present.
    """
    headings_seen: dict[str, int] = {}
    sections: list[Section] = []
    current_heading: str | None = None
    body_lines: list[str] = []
    in_fence = False
    found_heading = False

    def flush() -> None:
        nonlocal body_lines
        body = "\n".join(body_lines).strip("\n")
        body = "\n".join(line.rstrip() for line in body.split("\n")).strip()
        if current_heading is None:
            if body:
                sections.append(Section(heading="", body=body))
        else:
            sections.append(Section(heading=current_heading, body=body))
        body_lines = []

    for line in markdown.split("\n"):
        if _FENCE_RE.match(line.strip()):
            in_fence = not in_fence
            body_lines.append(line)
            continue
        m = None if in_fence else _HEADING_RE.match(line)
        if m:
            flush()
            heading = m.group(2).strip()
            count = headings_seen.get(heading, 0) + 1
            headings_seen[heading] = count
            if count > 1:
                deduped = f"{heading} ({count})"
                while deduped in headings_seen:
                    count += 1
                    deduped = f"{heading} ({count})"
                headings_seen[deduped] = 1
                heading = deduped
            current_heading = heading
            found_heading = True
        else:
            body_lines.append(line)
    flush()

    if not found_heading:
        raise UnparseableMarkdown("no Markdown headings found")
    return tuple(sections)


def sections_to_markdown(sections: tuple[Section, ...]) -> str:
    """Canonical serialization: level-2 headings, blank-line separated.

    ``parse_sections(sections_to_markdown(s)) == s`` for any sections that
    themselves came from ``parse_sections``.
    """
    parts: list[str] = []
    for section in sections:
        if section.heading:
            parts.append(f"## {section.heading}\n\n{section.body}".rstrip())
        else:
            parts.append(section.body.rstrip())
    return "\n\n".join(p for p in parts if p) + "\n"


def structure_markdown(
    text: NormalizedText,
    kind: str,
    llm: LlmGateway,
    backend_id: str = "mock",
    temperature: float = 0.2,
) -> StructuredDoc:
    """Ask the LLM to reshape ``text`` as Markdown and parse the result."""
    if not text.text.strip():
        raise InvalidParams("cannot structure empty text")
    prompt = build_structuring_prompt(kind, text.text)
    response = llm.complete(
        ChatRequest(
            backend_id=backend_id,
            system_prompt=STRUCTURING_SYSTEM_PROMPT,
            messages=(("user", prompt),),
            temperature=temperature,
            cache_eligible=True,
        )
    )
    sections = parse_sections(response.text)
    return StructuredDoc(
        doc_id=text.doc_id,
        markdown=sections_to_markdown(sections),
        sections=sections,
    )
