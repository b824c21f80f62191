"""Text extraction and normalization for uploaded documents."""
from __future__ import annotations

import re
import unicodedata

from ..errors import EmptyDocument, UnsupportedFormat
from ..tokenization import detect_language
from .pdf import extract_pdf_text
from .types import NormalizedText, RawDocument

# \n survives; \t becomes a space; \r, \v, \f act as line breaks.
_BREAKS = {"\r": "\n", "\v": "\n", "\f": "\n", "\t": " "}
_BLANK_RUN_RE = re.compile(r"\n{3,}")


def _decode_utf8(content: bytes) -> str:
    try:
        return content.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UnsupportedFormat("text payload is not valid UTF-8") from exc


def normalize_text(raw: str) -> str:
    """NFC-normalize, unify line breaks, and drop stray control characters.

    Idempotent: applying it to its own output returns the output unchanged.
    """
    text = unicodedata.normalize("NFC", raw)
    text = text.replace("\r\n", "\n")
    out: list[str] = []
    for ch in text:
        if ch == "\n":
            out.append(ch)
        elif ch in _BREAKS:
            out.append(_BREAKS[ch])
        elif unicodedata.category(ch) in ("Cc", "Cf"):
            continue
        else:
            out.append(ch)
    text = "".join(out)
    text = "\n".join(line.rstrip() for line in text.split("\n"))
    text = _BLANK_RUN_RE.sub("\n\n", text)
    return text.strip()


def extract_text(doc: RawDocument) -> NormalizedText:
    """Parse the payload per its declared format into clean Unicode text.

    The declared language wins; "auto" falls back to script detection on the
    extracted text. Raises UnsupportedFormat for unparseable payloads and
    EmptyDocument when nothing textual survives normalization.
    """
    if doc.format == "pdf":
        extracted = extract_pdf_text(doc.content)
    elif doc.format in ("plain_text", "markdown"):
        extracted = _decode_utf8(doc.content)
    else:  # RawDocument validates formats; guard against future drift
        raise UnsupportedFormat(f"unknown document format {doc.format!r}")
    text = normalize_text(extracted)
    if not text:
        raise EmptyDocument(f"document {doc.id} has no extractable text")
    language = doc.language if doc.language != "auto" else detect_language(text)
    return NormalizedText(doc_id=doc.id, text=text, language=language)
