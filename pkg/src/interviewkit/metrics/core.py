"""Alignment and preservation metrics.

Token space: the overlap coefficient |A ∩ B| / min(|A|, |B|) over unique
case-folded words. Latent space: cosine similarity of TF-IDF vectors fitted
on exactly the two compared texts, stop-words removed, raw term counts,
smoothed IDF ln((1+N)/(1+df)) + 1 with N = 2, L2-normalized weights.

Stop-words stay IN the token path and OUT of the latent path; both choices
are fixed here so the two routes stay independently checkable.
"""
from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass

from ..errors import EmptyAfterFiltering, EmptySetInput, InvalidParams, NoFeedback
from ..tokenization import metrics_segmenter
from .stopwords import stop_words_for


@dataclass(frozen=True)
class TokenSet:
    """Unique case-folded words of one text under one segmentation."""

    words: frozenset[str]
    language: str
    tokenizer_id: str

    def __post_init__(self):
        if any(not w for w in self.words):
            raise InvalidParams("TokenSet words must be non-empty strings")

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class TfidfVector:
    """L2-normalized term weights; comparable only within one corpus_id."""

    weights: dict[str, float]
    corpus_id: str

    def __post_init__(self):
        if any(w < 0 for w in self.weights.values()):
            raise InvalidParams("TF-IDF weights must be nonnegative")


@dataclass(frozen=True)
class FeedbackEvent:
    session_id: str
    exchange_index: int
    value: int
    timestamp: float = 0.0

    def __post_init__(self):
        if self.value not in (1, -1):
            raise InvalidParams(f"feedback value must be +1 or -1, got {self.value}")


# -- markup stripping -------------------------------------------------------

_FENCE_LINE_RE = re.compile(r"^\s*(```|~~~).*$", re.MULTILINE)
_HTML_TAG_RE = re.compile(r"<[^>\n]+>")
_IMAGE_RE = re.compile(r"!\[([^\]]*)\]\([^)]*\)")
_LINK_RE = re.compile(r"\[([^\]]*)\]\([^)]*\)")
_HEADING_RE = re.compile(r"^\s{0,3}#{1,6}\s*", re.MULTILINE)
_BLOCKQUOTE_RE = re.compile(r"^\s{0,3}>\s?", re.MULTILINE)
_BULLET_RE = re.compile(r"^\s*[-*+]\s+", re.MULTILINE)
_ORDERED_RE = re.compile(r"^\s*\d+[.)]\s+", re.MULTILINE)
_EMPHASIS_RE = re.compile(r"[*_`|]+")
_RULE_RE = re.compile(r"^\s*([-=*_]){3,}\s*$", re.MULTILINE)


def strip_markup(text: str) -> str:
    """Reduce Markdown/HTML syntax to its prose so formatting tokens never
    count toward similarity."""
    out = _FENCE_LINE_RE.sub(" ", text)
    out = _HTML_TAG_RE.sub(" ", out)
    out = _IMAGE_RE.sub(r"\1", out)
    out = _LINK_RE.sub(r"\1", out)
    out = _RULE_RE.sub(" ", out)
    out = _HEADING_RE.sub("", out)
    out = _BLOCKQUOTE_RE.sub("", out)
    out = _BULLET_RE.sub("", out)
    out = _ORDERED_RE.sub("", out)
    out = _EMPHASIS_RE.sub(" ", out)
    return out


# -- token space ------------------------------------------------------------

def word_set(
    text: str,
    language: str = "en",
    remove_stop_words: bool = False,
    stop_words: frozenset[str] | None = None,
) -> TokenSet:
    """Unique lowercase words under the language's metric segmentation."""
    if not text:
        raise EmptyAfterFiltering("cannot build a word set from empty text")
    segmenter = metrics_segmenter(language)
    words = {t.text.casefold() for t in segmenter.tokenize(text)}
    if remove_stop_words:
        filtered = stop_words if stop_words is not None else stop_words_for(language)
        words -= filtered
    if not words:
        raise EmptyAfterFiltering("no tokens survive segmentation and filtering")
    return TokenSet(
        words=frozenset(words), language=language, tokenizer_id=segmenter.tokenizer_id
    )


def overlap_coefficient(a: TokenSet, b: TokenSet) -> float:
    """|a ∩ b| / min(|a|, |b|) — 1.0 whenever either set contains the other."""
    if not a.words or not b.words:
        raise EmptySetInput("overlap coefficient needs two non-empty sets")
    return len(a.words & b.words) / min(len(a.words), len(b.words))


# -- latent space -----------------------------------------------------------

def _content_terms(text: str, language: str, stop_words: frozenset[str]) -> list[str]:
    segmenter = metrics_segmenter(language)
    return [
        t.text.casefold()
        for t in segmenter.tokenize(text)
        if t.text.casefold() not in stop_words
    ]


def tfidf_pair(
    text_a: str,
    text_b: str,
    language: str = "en",
    stop_words: frozenset[str] | None = None,
) -> tuple[TfidfVector, TfidfVector]:
    """Fit a two-document TF-IDF vocabulary and embed both texts in it."""
    filtered = stop_words if stop_words is not None else stop_words_for(language)
    terms_a = _content_terms(text_a, language, filtered)
    terms_b = _content_terms(text_b, language, filtered)
    if not terms_a or not terms_b:
        raise EmptyAfterFiltering("a text lost every term to stop-word filtering")

    set_a, set_b = set(terms_a), set(terms_b)
    vocabulary = sorted(set_a | set_b)
    df = {term: (term in set_a) + (term in set_b) for term in vocabulary}
    n_docs = 2
    idf = {
        term: math.log((1 + n_docs) / (1 + df[term])) + 1.0 for term in vocabulary
    }
    corpus_id = _corpus_id(text_a, text_b, language)

    def vectorize(terms: list[str]) -> TfidfVector:
        counts: dict[str, int] = {}
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
        raw = {term: counts.get(term, 0) * idf[term] for term in vocabulary}
        norm = math.sqrt(sum(w * w for w in raw.values()))
        weights = {t: (w / norm if norm else 0.0) for t, w in raw.items() if w}
        return TfidfVector(weights=weights, corpus_id=corpus_id)

    return vectorize(terms_a), vectorize(terms_b)


def tfidf_cosine(a: TfidfVector, b: TfidfVector) -> float:
    """Dot product of two L2-normalized vectors from the same fit."""
    if a.corpus_id != b.corpus_id:
        raise InvalidParams("TF-IDF vectors come from different fits")
    if len(b.weights) < len(a.weights):
        a, b = b, a
    return sum(w * b.weights.get(term, 0.0) for term, w in a.weights.items())


def _corpus_id(text_a: str, text_b: str, language: str) -> str:
    h = hashlib.sha256()
    for part in (language, text_a, text_b):
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]


# -- paired metrics -----------------------------------------------------------

def assessment_alignment(
    assessment: str, jd: str, language: str = "en"
) -> tuple[float, float]:
    """(token, latent) alignment between an assessment and the JD it serves."""
    return _token_and_latent(assessment, jd, language)


def content_preservation(
    assessment: str, resume: str, language: str = "en"
) -> tuple[float, float]:
    """(token, latent) preservation of the resume inside the assessment."""
    return _token_and_latent(assessment, resume, language)


def _token_and_latent(left: str, right: str, language: str) -> tuple[float, float]:
    left_prose = strip_markup(left)
    right_prose = strip_markup(right)
    token = overlap_coefficient(
        word_set(left_prose, language), word_set(right_prose, language)
    )
    vec_left, vec_right = tfidf_pair(left_prose, right_prose, language)
    return token, tfidf_cosine(vec_left, vec_right)


# -- user experience -----------------------------------------------------------

def user_experience(events: list[FeedbackEvent]) -> float:
    """Arithmetic mean of binary feedback values."""
    if not events:
        raise NoFeedback("user_experience needs at least one feedback event")
    return sum(e.value for e in events) / len(events)
