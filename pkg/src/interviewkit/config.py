"""Service configuration.

Everything tunable lives here with the documented defaults: chunking
parameters, retrieval threshold, HNSW knobs, bank size and role targets,
follow-up thresholds, LLM backend registry, and provider endpoints. Secrets
never appear in config files; a backend's ``auth_ref`` names an environment
variable that holds the key.
"""
from __future__ import annotations

from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any

import yaml


@dataclass
class HnswParams:
    m: int = 16
    ef_construction: int = 200
    ef_search: int = 64
    seed: int = 0


@dataclass
class FollowupThresholds:
    min_response_tokens: int = 15
    followup_coverage: float = 0.3
    next_topic_coverage: float = 0.6
    max_followups_per_question: int = 1


@dataclass
class BackendConfig:
    backend_id: str
    endpoint: str = ""
    model_name: str = ""
    auth_ref: str | None = None   # env var name, never the secret itself
    timeout: float = 60.0


DEFAULT_ROLE_TARGETS: dict[str, dict[str, float]] = {
    "technical": {"technical": 0.50, "behavioral": 0.30, "situational": 0.20},
    "managerial": {"technical": 0.20, "behavioral": 0.50, "situational": 0.30},
    "general": {"technical": 0.33, "behavioral": 0.34, "situational": 0.33},
}


@dataclass
class ServiceConfig:
    # document pipeline
    chunk_size: int = 512
    chunk_overlap: int = 150
    chunk_source: str = "raw"               # raw | markdown

    # vector index
    embedding_dim: int = 1536
    embedding_url: str | None = None
    embedding_model: str = "text-embedding-3-small"
    similarity_threshold: float = 0.75
    retrieval_k: int = 5
    hnsw: HnswParams = field(default_factory=HnswParams)

    # question bank
    bank_size: int = 12
    role_targets: dict[str, dict[str, float]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_ROLE_TARGETS.items()}
    )

    # interview session
    followup: FollowupThresholds = field(default_factory=FollowupThresholds)
    buffer_capacity: int = 20               # turns
    session_minutes: float = 15.0

    # LLM gateway
    backends: list[BackendConfig] = field(default_factory=list)
    default_backend: str = "mock"
    llm_retries: int = 2
    llm_timeout: float = 60.0
    llm_backoff: float = 0.5
    cache_ttl: float = 86_400.0
    structured_temperature: float = 0.2
    live_temperature: float = 0.7

    # media adapters
    stt_url: str | None = None
    tts_url: str | None = None
    tts_voice: str = "default"

    # service
    data_dir: str = "./data"
    max_upload_bytes: int = 5 * 1024 * 1024
    auth_token_env: str | None = None       # env var holding the bearer token

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ServiceConfig":
        raw = dict(raw or {})
        kwargs: dict[str, Any] = {}
        if "hnsw" in raw:
            kwargs["hnsw"] = HnswParams(**raw.pop("hnsw"))
        if "followup" in raw:
            kwargs["followup"] = FollowupThresholds(**raw.pop("followup"))
        if "backends" in raw:
            kwargs["backends"] = [BackendConfig(**b) for b in raw.pop("backends")]
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs.update(raw)
        return cls(**kwargs)

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ServiceConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"config root must be a mapping, got {type(raw).__name__}")
        return cls.from_dict(raw)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def session_budget_seconds(self) -> float:
        return self.session_minutes * 60.0
