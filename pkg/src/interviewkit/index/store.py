"""Chunk-level vector store: HNSW retrieval plus record bookkeeping.

Persistence is a single file: magic, SHA-256 of the body, then a JSON header
(graph state + chunk records) and the raw float64 vector block. Loading
verifies the digest, so truncation or bit rot surfaces as CorruptIndex, and
the restored graph is byte-identical — queries answer exactly as before.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..config import HnswParams
from ..documents.types import TextChunk
from ..errors import CorruptIndex, InvalidParams, IoFailure
from .embedding import EMBEDDING_DIM, EmbeddingProvider, EmbeddingVector, embed
from .hnsw import HnswIndex

_MAGIC = b"IVKX0001"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ChunkMeta:
    kind: str = ""
    language: str = ""
    seq: int = 0


@dataclass(frozen=True)
class ChunkRecord:
    chunk_id: str
    doc_id: str
    vector: EmbeddingVector
    text: str
    metadata: ChunkMeta = field(default_factory=ChunkMeta)


@dataclass(frozen=True)
class QueryResult:
    chunk_id: str
    score: float
    text: str


@dataclass(frozen=True)
class MatchPair:
    requirement_chunk: TextChunk
    evidence: list[QueryResult]


class VectorIndex:
    """Upsertable store answering thresholded top-k cosine queries.

    Concurrent readers are safe; writers serialize on an internal lock.
    """

    def __init__(self, dim: int = EMBEDDING_DIM, params: HnswParams | None = None):
        params = params or HnswParams()
        self.dim = dim
        self.params = params
        self._hnsw = HnswIndex(
            dim=dim,
            m=params.m,
            ef_construction=params.ef_construction,
            ef_search=params.ef_search,
            seed=params.seed,
        )
        self._node_by_chunk: dict[str, int] = {}
        self._record_by_node: dict[int, ChunkRecord] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._node_by_chunk)

    def __contains__(self, chunk_id: str) -> bool:
        return chunk_id in self._node_by_chunk

    def get(self, chunk_id: str) -> ChunkRecord | None:
        node = self._node_by_chunk.get(chunk_id)
        return None if node is None else self._record_by_node[node]

    def upsert(self, records: Sequence[ChunkRecord]) -> int:
        """Insert records; an existing chunk_id is replaced wholesale."""
        count = 0
        with self._lock:
            for record in records:
                old = self._node_by_chunk.get(record.chunk_id)
                if old is not None:
                    self._hnsw.remove(old)
                    del self._record_by_node[old]
                node = self._hnsw.add(record.vector.values)
                self._node_by_chunk[record.chunk_id] = node
                self._record_by_node[node] = record
                count += 1
        return count

    def search(
        self,
        query: EmbeddingVector,
        k: int,
        threshold: float = 0.75,
        ef: int | None = None,
    ) -> list[QueryResult]:
        """At most k results with score strictly above ``threshold``,
        descending score, ties by ascending chunk_id."""
        if k <= 0:
            raise InvalidParams("k must be positive")
        if not self._node_by_chunk:
            return []
        hits = self._hnsw.knn(query.values, k, ef=ef)
        results = []
        for node, score in hits:
            if score > threshold:
                record = self._record_by_node[node]
                results.append(QueryResult(record.chunk_id, score, record.text))
        results.sort(key=lambda r: (-r.score, r.chunk_id))
        return results

    def match_requirements(
        self,
        jd_chunks: Sequence[TextChunk],
        provider: EmbeddingProvider,
        k: int = 5,
        threshold: float = 0.75,
        ef: int | None = None,
    ) -> list[MatchPair]:
        """Retrieve supporting evidence for every requirement chunk; pairs
        keep the input order and may carry empty evidence."""
        pairs = []
        for chunk in jd_chunks:
            query = embed(chunk.text, provider)
            evidence = self.search(query, k=k, threshold=threshold, ef=ef)
            pairs.append(MatchPair(requirement_chunk=chunk, evidence=evidence))
        return pairs

    # -- persistence -------------------------------------------------------------

    def persist(self, path: str | os.PathLike) -> None:
        with self._lock:
            state = self._hnsw.state_dict()
            records = []
            for chunk_id, node in sorted(self._node_by_chunk.items()):
                rec = self._record_by_node[node]
                records.append(
                    {
                        "chunk_id": rec.chunk_id,
                        "doc_id": rec.doc_id,
                        "text": rec.text,
                        "node": node,
                        "metadata": {
                            "kind": rec.metadata.kind,
                            "language": rec.metadata.language,
                            "seq": rec.metadata.seq,
                        },
                    }
                )
            header = {
                "version": FORMAT_VERSION,
                "dim": self.dim,
                "count": self._hnsw.node_count,
                "hnsw": state,
                "records": records,
            }
            header_bytes = json.dumps(header, ensure_ascii=False).encode("utf-8")
            if self._hnsw.node_count:
                matrix = np.stack([self._hnsw.vector_of(i) for i in range(self._hnsw.node_count)])
            else:
                matrix = np.zeros((0, self.dim), dtype=np.float64)
            body = struct.pack("<I", len(header_bytes)) + header_bytes + matrix.tobytes()
        digest = hashlib.sha256(body).digest()
        try:
            with open(path, "wb") as fh:
                fh.write(_MAGIC + digest + body)
        except OSError as exc:
            raise IoFailure(f"cannot write index to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | os.PathLike) -> "VectorIndex":
        try:
            with open(path, "rb") as fh:
                blob = fh.read()
        except FileNotFoundError as exc:
            raise IoFailure(f"index file not found: {path}") from exc
        except OSError as exc:
            raise IoFailure(f"cannot read index from {path}: {exc}") from exc
        if len(blob) < len(_MAGIC) + 32 + 4 or not blob.startswith(_MAGIC):
            raise CorruptIndex(f"{path} is not a vector index file")
        digest = blob[len(_MAGIC) : len(_MAGIC) + 32]
        body = blob[len(_MAGIC) + 32 :]
        if hashlib.sha256(body).digest() != digest:
            raise CorruptIndex(f"{path} failed its checksum")
        try:
            (header_len,) = struct.unpack_from("<I", body, 0)
            header = json.loads(body[4 : 4 + header_len].decode("utf-8"))
            if header["version"] != FORMAT_VERSION:
                raise CorruptIndex(
                    f"{path} has unsupported format version {header['version']}"
                )
            dim = header["dim"]
            count = header["count"]
            vec_bytes = body[4 + header_len :]
            expected = count * dim * 8
            if len(vec_bytes) != expected:
                raise CorruptIndex(f"{path} vector block has the wrong size")
            matrix = np.frombuffer(vec_bytes, dtype=np.float64).reshape(count, dim)
            hnsw_state = header["hnsw"]
            params = HnswParams(
                m=hnsw_state["m"],
                ef_construction=hnsw_state["ef_construction"],
                ef_search=hnsw_state["ef_search"],
                seed=hnsw_state["seed"],
            )
            index = cls(dim=dim, params=params)
            index._hnsw = HnswIndex.from_state(hnsw_state, matrix)
            for item in header["records"]:
                node = int(item["node"])
                meta = item.get("metadata", {})
                record = ChunkRecord(
                    chunk_id=item["chunk_id"],
                    doc_id=item["doc_id"],
                    vector=EmbeddingVector(index._hnsw.vector_of(node)),
                    text=item["text"],
                    metadata=ChunkMeta(
                        kind=meta.get("kind", ""),
                        language=meta.get("language", ""),
                        seq=int(meta.get("seq", 0)),
                    ),
                )
                index._node_by_chunk[record.chunk_id] = node
                index._record_by_node[node] = record
        except CorruptIndex:
            raise
        except (KeyError, ValueError, TypeError, struct.error) as exc:
            raise CorruptIndex(f"{path} has a malformed header: {exc}") from exc
        return index


def upsert(records: Sequence[ChunkRecord], index: VectorIndex) -> int:
    return index.upsert(records)


def search(
    query: EmbeddingVector, k: int, index: VectorIndex, threshold: float = 0.75
) -> list[QueryResult]:
    return index.search(query, k=k, threshold=threshold)


def match_requirements(
    jd_chunks: Sequence[TextChunk],
    resume_index: VectorIndex,
    provider: EmbeddingProvider,
    k: int = 5,
    threshold: float = 0.75,
) -> list[MatchPair]:
    return resume_index.match_requirements(jd_chunks, provider, k=k, threshold=threshold)
