"""Sliding-window token chunking.

Chunk ``k`` covers token offsets ``[k*stride, min(k*stride + chunk_size, T))``
where ``stride = chunk_size - overlap``; emission stops with the chunk that
reaches the final token, so adjacent chunks share exactly ``overlap`` tokens
and together cover the whole document.
"""
from __future__ import annotations

from ..errors import InvalidParams
from ..tokenization import Tokenizer, default_tokenizer
from .types import NormalizedText, TextChunk


def chunk(
    text: NormalizedText,
    chunk_size: int = 512,
    overlap: int = 150,
    tokenizer: Tokenizer | None = None,
) -> list[TextChunk]:
    """Split ``text`` into overlapping token windows.

    Each chunk's ``text`` is the original character span from the first to
    the last token of the window, so no characters are invented or lost
    inside a window. Returns [] for text with no tokens (punctuation-only).
    """
    if chunk_size <= 0:
        raise InvalidParams(f"chunk_size must be positive, got {chunk_size}")
    if not 0 <= overlap < chunk_size:
        raise InvalidParams(
            f"overlap must satisfy 0 <= overlap < chunk_size, got {overlap}"
        )
    tok = tokenizer if tokenizer is not None else default_tokenizer()
    # chunking only needs offsets; token_spans avoids per-token strings
    spans_of = getattr(tok, "token_spans", None)
    if spans_of is not None:
        spans = spans_of(text.text)
    else:
        spans = [(t.start, t.end) for t in tok.tokenize(text.text)]
    total = len(spans)
    if total == 0:
        return []
    stride = chunk_size - overlap
    chunks: list[TextChunk] = []
    k = 0
    while k * stride < total:
        start = k * stride
        end = min(start + chunk_size, total)
        chunks.append(
            TextChunk(
                doc_id=text.doc_id,
                seq=k,
                token_start=start,
                token_end=end,
                text=text.text[spans[start][0] : spans[end - 1][1]],
            )
        )
        if end == total:
            break
        k += 1
    return chunks
