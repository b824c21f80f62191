"""Embeddings, the HNSW graph, and the chunk-level vector store."""
from .embedding import (
    EMBEDDING_DIM,
    EmbeddingProvider,
    EmbeddingVector,
    HttpEmbeddingProvider,
    MockEmbeddingProvider,
    cosine,
    embed,
)
from .hnsw import HnswIndex
from .store import (
    ChunkMeta,
    ChunkRecord,
    MatchPair,
    QueryResult,
    VectorIndex,
    match_requirements,
    search,
    upsert,
)

__all__ = [
    "EMBEDDING_DIM",
    "ChunkMeta",
    "ChunkRecord",
    "EmbeddingProvider",
    "EmbeddingVector",
    "HnswIndex",
    "HttpEmbeddingProvider",
    "MatchPair",
    "MockEmbeddingProvider",
    "QueryResult",
    "VectorIndex",
    "cosine",
    "embed",
    "match_requirements",
    "search",
    "upsert",
]
