"""Bundled metric computation over an (assessment, JD, resume) triple."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..errors import InvalidParams
from ..tokenization import metrics_segmenter
from .core import (
    FeedbackEvent,
    assessment_alignment,
    content_preservation,
    user_experience,
)


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class MetricReport:
    """One row of evaluation output plus the input provenance needed to
    reproduce it."""

    aa_token: float
    aa_latent: float
    cp_token: float
    cp_latent: float
    ux: float | None
    assessment_digest: str
    jd_digest: str
    resume_digest: str
    language: str
    tokenizer_id: str

    def __post_init__(self):
        for name in ("aa_token", "aa_latent", "cp_token", "cp_latent"):
            value = getattr(self, name)
            if not -1e-9 <= value <= 1 + 1e-9:
                raise InvalidParams(f"{name}={value} outside [0, 1]")
        if self.ux is not None and not -1 - 1e-9 <= self.ux <= 1 + 1e-9:
            raise InvalidParams(f"ux={self.ux} outside [-1, 1]")

    def to_dict(self) -> dict:
        return {
            "aa_token": self.aa_token,
            "aa_latent": self.aa_latent,
            "cp_token": self.cp_token,
            "cp_latent": self.cp_latent,
            "ux": self.ux,
            "assessment_digest": self.assessment_digest,
            "jd_digest": self.jd_digest,
            "resume_digest": self.resume_digest,
            "language": self.language,
            "tokenizer_id": self.tokenizer_id,
        }


def compute_metric_report(
    assessment: str,
    jd: str,
    resume: str,
    language: str = "en",
    events: list[FeedbackEvent] | None = None,
) -> MetricReport:
    aa_token, aa_latent = assessment_alignment(assessment, jd, language)
    cp_token, cp_latent = content_preservation(assessment, resume, language)
    ux = user_experience(events) if events else None
    return MetricReport(
        aa_token=aa_token,
        aa_latent=aa_latent,
        cp_token=cp_token,
        cp_latent=cp_latent,
        ux=ux,
        assessment_digest=text_digest(assessment),
        jd_digest=text_digest(jd),
        resume_digest=text_digest(resume),
        language=language,
        tokenizer_id=metrics_segmenter(language).tokenizer_id,
    )
