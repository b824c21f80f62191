"""Domain types for the document pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyDocument

DOC_KINDS = frozenset({"resume", "job_description"})
DOC_FORMATS = frozenset({"pdf", "plain_text", "markdown"})
DOC_LANGUAGES = frozenset({"en", "ja", "auto"})


@dataclass(frozen=True)
class RawDocument:
    """An uploaded document exactly as received; kind/format are fixed."""

    id: str
    kind: str
    language: str
    format: str
    content: bytes

    def __post_init__(self):
        if self.kind not in DOC_KINDS:
            raise ValueError(f"unknown document kind: {self.kind!r}")
        if self.format not in DOC_FORMATS:
            raise ValueError(f"unknown document format: {self.format!r}")
        if self.language not in DOC_LANGUAGES:
            raise ValueError(f"unknown document language: {self.language!r}")
        if not self.content:
            raise EmptyDocument("document content must be non-empty")


@dataclass(frozen=True)
class NormalizedText:
    """Extracted text: NFC-normalized, newline-only control chars, non-empty."""

    doc_id: str
    text: str
    language: str


@dataclass(frozen=True)
class TextChunk:
    """A token-bounded slice of one document.

    ``token_start``/``token_end`` are offsets into the document's token
    sequence; ``text`` is the original character span covering those tokens.
    """

    doc_id: str
    seq: int
    token_start: int
    token_end: int
    text: str

    @property
    def token_count(self) -> int:
        return self.token_end - self.token_start


@dataclass(frozen=True)
class Section:
    heading: str
    body: str


@dataclass(frozen=True)
class StructuredDoc:
    """Markdown form of a document; ``markdown`` is the canonical
    serialization of ``sections`` (headings unique, order preserved)."""

    doc_id: str
    markdown: str
    sections: tuple[Section, ...] = field(default=())

    def section_headings(self) -> list[str]:
        return [s.heading for s in self.sections]
