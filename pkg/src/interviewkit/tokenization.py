"""Deterministic, dependency-free text segmentation.

Two segmenters share one contract:

* ``WordBoundaryTokenizer`` — the chunking unit. Latin-script (and any other
  alphabetic) runs become one token per word; Han/kana runs become one token
  per character. Punctuation and whitespace separate tokens and are never
  tokens themselves.
* ``JapaneseBigramSegmenter`` — the metrics fallback for Japanese when no
  morphological dictionary is configured: character bigrams over Han/kana
  runs, plain words elsewhere.

Both are pure and deterministic; ``tokenizer_id`` strings let downstream
metric reports record exactly which segmentation produced them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol

# Hiragana, katakana (incl. phonetic extensions and halfwidth forms) and the
# common Han ranges. Kept as a raw class body so it can be embedded in regexes.
_CJK_CLASS = (
    "ぁ-ゟ"   # hiragana
    "゠-ヿ"   # katakana
    "ㇰ-ㇿ"   # katakana phonetic extensions
    "ｦ-ﾟ"   # halfwidth katakana
    "㐀-䶿"   # CJK extension A
    "一-鿿"   # CJK unified ideographs
    "豈-﫿"   # CJK compatibility ideographs
)

_CJK_RE = re.compile(f"[{_CJK_CLASS}]")
_KANA_RE = re.compile("[ぁ-ゟ゠-ヿㇰ-ㇿｦ-ﾟ]")
# One CJK character, or a maximal run of word characters that are not CJK.
_TOKEN_RE = re.compile(f"[{_CJK_CLASS}]|(?:(?![{_CJK_CLASS}])[^\\W_])+")
_CJK_RUN_RE = re.compile(f"[{_CJK_CLASS}]+")
_LATIN_LETTER_RE = re.compile(r"[A-Za-zÀ-ɏ]")
_ANY_LETTER_RE = re.compile(r"[^\W\d_]")


@dataclass(frozen=True)
class Token:
    """A segment of the source string with its character offsets."""

    text: str
    start: int
    end: int


class Tokenizer(Protocol):
    """Pluggable segmentation contract used by chunking and metrics."""

    tokenizer_id: str

    def tokenize(self, text: str) -> list[Token]: ...


class WordBoundaryTokenizer:
    """Unicode word-boundary segmentation with per-character Han/kana."""

    tokenizer_id = "unicode-words-v1"

    def tokenize(self, text: str) -> list[Token]:
        return [
            Token(m.group(), m.start(), m.end())
            for m in _TOKEN_RE.finditer(text)
        ]

    def token_spans(self, text: str) -> list[tuple[int, int]]:
        """Offsets only; skips building a string per token."""
        return [m.span() for m in _TOKEN_RE.finditer(text)]


class JapaneseBigramSegmenter:
    """Character-bigram segmentation over Han/kana runs.

    A run of n CJK characters yields n-1 overlapping bigrams (or the single
    character when n == 1); non-CJK word runs pass through whole. This keeps
    word-set metrics total for Japanese without a dictionary.
    """

    tokenizer_id = "ja-bigram-v1"

    def tokenize(self, text: str) -> list[Token]:
        out: list[Token] = []
        cjk_spans = [(m.start(), m.end()) for m in _CJK_RUN_RE.finditer(text)]
        for m in _TOKEN_RE.finditer(text):
            if not _CJK_RE.match(m.group()):
                out.append(Token(m.group(), m.start(), m.end()))
        for start, end in cjk_spans:
            if end - start == 1:
                out.append(Token(text[start:end], start, end))
                continue
            for i in range(start, end - 1):
                out.append(Token(text[i : i + 2], i, i + 2))
        out.sort(key=lambda t: (t.start, t.end))
        return out


def detect_language(text: str, default: str = "en") -> str:
    """Best-effort script-based language guess: ``en``, ``ja`` or ``other``.

    Any kana is decisive for Japanese; Han without kana is still treated as
    Japanese (the engine only distinguishes en/ja). Latin letters vote for
    English; remaining alphabetic scripts vote ``other``.
    """
    if _KANA_RE.search(text) or _CJK_RE.search(text):
        return "ja"
    latin = len(_LATIN_LETTER_RE.findall(text))
    letters = len(_ANY_LETTER_RE.findall(text))
    if letters == 0:
        return default
    if latin >= letters - latin:
        return "en"
    return "other"


def default_tokenizer() -> WordBoundaryTokenizer:
    return WordBoundaryTokenizer()


def metrics_segmenter(language: str) -> Tokenizer:
    """Segmenter used by the word-set metrics for a given language."""
    if language == "ja":
        return JapaneseBigramSegmenter()
    return WordBoundaryTokenizer()
