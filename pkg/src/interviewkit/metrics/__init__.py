"""Evaluation metrics: token/latent alignment, preservation, UX score."""
from .core import (
    FeedbackEvent,
    TfidfVector,
    TokenSet,
    assessment_alignment,
    content_preservation,
    overlap_coefficient,
    strip_markup,
    tfidf_cosine,
    tfidf_pair,
    user_experience,
    word_set,
)
from .report import MetricReport, compute_metric_report, text_digest
from .stopwords import ENGLISH_STOP_WORDS, JAPANESE_STOP_WORDS, stop_words_for

__all__ = [
    "ENGLISH_STOP_WORDS",
    "FeedbackEvent",
    "JAPANESE_STOP_WORDS",
    "MetricReport",
    "TfidfVector",
    "TokenSet",
    "assessment_alignment",
    "compute_metric_report",
    "content_preservation",
    "overlap_coefficient",
    "stop_words_for",
    "strip_markup",
    "text_digest",
    "tfidf_cosine",
    "tfidf_pair",
    "user_experience",
    "word_set",
]
