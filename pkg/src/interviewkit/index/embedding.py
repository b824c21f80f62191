"""Embedding vectors and providers.

Vectors are fixed at 1536 dimensions and always unit-norm: whatever a
provider returns is renormalized on the way in, so cosine similarity
downstream is a plain dot product.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx
import numpy as np

from ..errors import DimensionMismatch, InvalidParams, ProviderUnavailable

EMBEDDING_DIM = 1536
_NORM_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """A unit-norm float64 vector of EMBEDDING_DIM components."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.shape != (EMBEDDING_DIM,):
            raise DimensionMismatch(
                f"expected {EMBEDDING_DIM} components, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidParams("embedding components must be finite")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > _NORM_TOLERANCE:
            raise InvalidParams(f"vector norm {norm} is not unit within 1e-6")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_raw(cls, values: Sequence[float] | np.ndarray) -> "EmbeddingVector":
        """Renormalize arbitrary provider output into a unit vector."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (EMBEDDING_DIM,):
            raise DimensionMismatch(
                f"expected {EMBEDDING_DIM} components, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ProviderUnavailable("provider returned non-finite components")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ProviderUnavailable("provider returned a zero vector")
        return cls(arr / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity; for unit vectors this is exactly the dot product."""
    return float(np.dot(a.values, b.values))


class EmbeddingProvider(Protocol):
    """Returns raw (not necessarily normalized) components for a text."""

    def fetch(self, text: str) -> Sequence[float]: ...


class HttpEmbeddingProvider:
    """Client for an embeddings service.

    Wire shape: POST {model, input: [text]} → {data: [{embedding: [...]}]}.
    """

    def __init__(self, url: str, model: str, client: httpx.Client | None = None,
                 timeout: float = 30.0):
        self.url = url
        self.model = model
        self.timeout = timeout
        self._client = client or httpx.Client()

    def fetch(self, text: str) -> Sequence[float]:
        try:
            resp = self._client.post(
                self.url,
                json={"model": self.model, "input": [text]},
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(
                f"embedding service unreachable: {type(exc).__name__}"
            ) from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(
                f"embedding service returned HTTP {resp.status_code}"
            )
        try:
            return resp.json()["data"][0]["embedding"]
        except (ValueError, LookupError, TypeError) as exc:
            raise ProviderUnavailable("embedding service returned a malformed body") from exc


class MockEmbeddingProvider:
    """Deterministic offline provider: identical texts map to identical
    vectors, sampled from a PCG64 stream seeded by the text digest."""

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim

    def fetch(self, text: str) -> np.ndarray:
        digest = hashlib.sha256(text.encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "big")
        rng = np.random.Generator(np.random.PCG64(seed))
        return rng.standard_normal(self.dim)


def embed(text: str, provider: EmbeddingProvider) -> EmbeddingVector:
    """Fetch and renormalize one embedding."""
    if not text:
        raise InvalidParams("cannot embed empty text")
    raw = provider.fetch(text)
    return EmbeddingVector.from_raw(raw)
