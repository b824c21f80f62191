"""Document ingestion: extraction, normalization, chunking, structuring."""
from .chunking import chunk
from .extract import extract_text, normalize_text
from .pdf import extract_pdf_text
from .structure import (
    build_structuring_prompt,
    parse_sections,
    sections_to_markdown,
    structure_markdown,
)
from .types import (
    DOC_FORMATS,
    DOC_KINDS,
    DOC_LANGUAGES,
    NormalizedText,
    RawDocument,
    Section,
    StructuredDoc,
    TextChunk,
)

__all__ = [
    "DOC_FORMATS",
    "DOC_KINDS",
    "DOC_LANGUAGES",
    "NormalizedText",
    "RawDocument",
    "Section",
    "StructuredDoc",
    "TextChunk",
    "build_structuring_prompt",
    "chunk",
    "extract_pdf_text",
    "extract_text",
    "normalize_text",
    "parse_sections",
    "sections_to_markdown",
    "structure_markdown",
]
