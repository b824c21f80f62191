"""Hierarchical navigable small-world graph over unit vectors.

A multi-layer proximity graph: each node draws a geometric random level;
upper layers form progressively sparser "express lanes" and layer 0 holds
everything. Queries greedily descend from the top layer's entry point, then
run a best-first beam search (width ``ef``) at layer 0.

Distances are negative dot products, which orders identically to cosine
distance because all stored vectors are unit-norm. Removal tombstones the
node: it keeps routing traffic but is excluded from results, so persisted
graphs stay byte-stable and searches stay reproducible.

Everything is deterministic given the construction seed and insertion order:
heap ties break on node id, neighbor selection is the classic diversity
heuristic with nearest-first backfill.
"""
from __future__ import annotations

import heapq
import math
import threading
from typing import Iterable

import numpy as np


class HnswIndex:
    def __init__(
        self,
        dim: int,
        m: int = 16,
        ef_construction: int = 200,
        ef_search: int = 64,
        seed: int = 0,
    ):
        if m < 2:
            raise ValueError("m must be >= 2")
        self.dim = dim
        self.m = m
        self.m0 = 2 * m  # layer 0 keeps a denser neighborhood
        self.ef_construction = max(ef_construction, m)
        self.ef_search = ef_search
        self.seed = seed
        self._ml = 1.0 / math.log(m)
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self._vecs: list[np.ndarray] = []
        self._levels: list[int] = []
        self._alive: list[bool] = []
        # node -> level -> neighbor ids (list per level, 0..node_level)
        self._neighbors: list[list[list[int]]] = []
        self._entry: int | None = None
        self._max_level = -1
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return sum(self._alive)

    @property
    def node_count(self) -> int:
        return len(self._vecs)

    def vector_of(self, node_id: int) -> np.ndarray:
        return self._vecs[node_id]

    def is_alive(self, node_id: int) -> bool:
        return self._alive[node_id]

    # -- construction ---------------------------------------------------------

    def _sample_level(self) -> int:
        u = float(self._rng.random())
        if u <= 0.0:
            return 0
        return int(-math.log(u) * self._ml)

    def add(self, vector: np.ndarray) -> int:
        """Insert a unit vector; returns the new node id."""
        vec = np.ascontiguousarray(vector, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(f"expected shape ({self.dim},), got {vec.shape}")
        with self._write_lock:
            level = self._sample_level()
            node = len(self._vecs)
            self._vecs.append(vec)
            self._levels.append(level)
            self._alive.append(True)
            self._neighbors.append([[] for _ in range(level + 1)])
            if self._entry is None:
                self._entry = node
                self._max_level = level
                return node
            ep = self._entry
            # greedy descent through layers above the new node's level
            for lc in range(self._max_level, level, -1):
                ep = self._greedy_closest(vec, ep, lc)
            # beam search + connect on each shared layer, top-down
            eps = [ep]
            for lc in range(min(level, self._max_level), -1, -1):
                candidates = self._search_layer(vec, eps, self.ef_construction, lc)
                m_max = self.m0 if lc == 0 else self.m
                selected = self._select_neighbors(vec, candidates, m_max)
                self._neighbors[node][lc] = list(selected)
                for peer in selected:
                    peer_nbrs = self._neighbors[peer][lc]
                    peer_nbrs.append(node)
                    if len(peer_nbrs) > m_max:
                        self._shrink(peer, lc, m_max)
                eps = [n for _, n in candidates]
            if level > self._max_level:
                self._max_level = level
                self._entry = node
            return node

    def remove(self, node_id: int) -> None:
        """Tombstone a node: it stops appearing in results but keeps routing."""
        with self._write_lock:
            self._alive[node_id] = False

    def _dist(self, query: np.ndarray, node: int) -> float:
        return -float(np.dot(query, self._vecs[node]))

    def _greedy_closest(self, query: np.ndarray, entry: int, level: int) -> int:
        current = entry
        current_dist = self._dist(query, current)
        improved = True
        while improved:
            improved = False
            for nb in self._neighbors[current][level]:
                d = self._dist(query, nb)
                if d < current_dist or (d == current_dist and nb < current):
                    current, current_dist = nb, d
                    improved = True
        return current

    def _search_layer(
        self, query: np.ndarray, entries: Iterable[int], ef: int, level: int
    ) -> list[tuple[float, int]]:
        """Best-first beam search; returns (dist, node) ascending by dist."""
        visited: set[int] = set()
        candidates: list[tuple[float, int]] = []
        results: list[tuple[float, int]] = []  # max-heap via negated dist
        for ep in entries:
            if ep in visited:
                continue
            visited.add(ep)
            d = self._dist(query, ep)
            heapq.heappush(candidates, (d, ep))
            heapq.heappush(results, (-d, ep))
        while candidates:
            d, node = heapq.heappop(candidates)
            if results and d > -results[0][0] and len(results) >= ef:
                break
            for nb in self._neighbors[node][level]:
                if nb in visited:
                    continue
                visited.add(nb)
                dn = self._dist(query, nb)
                if len(results) < ef or dn < -results[0][0]:
                    heapq.heappush(candidates, (dn, nb))
                    heapq.heappush(results, (-dn, nb))
                    if len(results) > ef:
                        heapq.heappop(results)
        return sorted((-nd, n) for nd, n in results)

    def _select_neighbors(
        self, query: np.ndarray, candidates: list[tuple[float, int]], m_max: int
    ) -> list[int]:
        """Diversity heuristic: keep a candidate only when it is closer to the
        query than to every neighbor kept so far; backfill nearest-first."""
        selected: list[tuple[float, int]] = []
        skipped: list[int] = []
        for d, c in candidates:
            if len(selected) >= m_max:
                break
            vec_c = self._vecs[c]
            diverse = all(
                -float(np.dot(vec_c, self._vecs[s])) >= d for _, s in selected
            )
            if diverse:
                selected.append((d, c))
            else:
                skipped.append(c)
        out = [c for _, c in selected]
        for c in skipped:
            if len(out) >= m_max:
                break
            out.append(c)
        return out

    def _shrink(self, node: int, level: int, m_max: int) -> None:
        vec = self._vecs[node]
        nbrs = self._neighbors[node][level]
        ranked = sorted((self._dist(vec, n), n) for n in nbrs)
        self._neighbors[node][level] = self._select_neighbors(vec, ranked, m_max)

    # -- queries ---------------------------------------------------------------

    def knn(self, query: np.ndarray, k: int, ef: int | None = None) -> list[tuple[int, float]]:
        """Top-k live nodes by dot-product score, descending.

        Ties break on ascending node id. ``ef`` widens the layer-0 beam; it
        is clamped to at least k.
        """
        if k <= 0 or self._entry is None:
            return []
        vec = np.ascontiguousarray(query, dtype=np.float64)
        ep = self._entry
        for lc in range(self._max_level, 0, -1):
            ep = self._greedy_closest(vec, ep, lc)
        beam = max(ef if ef is not None else self.ef_search, k)
        found = self._search_layer(vec, [ep], beam, 0)
        live = [(d, n) for d, n in found if self._alive[n]]
        live.sort()
        return [(n, -d) for d, n in live[:k]]

    # -- persistence -------------------------------------------------------------

    def state_dict(self) -> dict:
        """JSON-safe graph state (vectors excluded; caller serializes those)."""
        return {
            "dim": self.dim,
            "m": self.m,
            "ef_construction": self.ef_construction,
            "ef_search": self.ef_search,
            "seed": self.seed,
            "entry": self._entry,
            "max_level": self._max_level,
            "levels": list(self._levels),
            "alive": [1 if a else 0 for a in self._alive],
            "neighbors": self._neighbors,
            "rng_state": _jsonify_rng(self._rng.bit_generator.state),
        }

    @classmethod
    def from_state(cls, state: dict, vectors: np.ndarray) -> "HnswIndex":
        idx = cls(
            dim=state["dim"],
            m=state["m"],
            ef_construction=state["ef_construction"],
            ef_search=state["ef_search"],
            seed=state["seed"],
        )
        idx._entry = state["entry"]
        idx._max_level = state["max_level"]
        idx._levels = [int(x) for x in state["levels"]]
        idx._alive = [bool(x) for x in state["alive"]]
        idx._neighbors = [
            [[int(n) for n in lvl] for lvl in node] for node in state["neighbors"]
        ]
        idx._vecs = [np.ascontiguousarray(vectors[i]) for i in range(vectors.shape[0])]
        if len(idx._vecs) != len(idx._levels):
            raise ValueError("vector count does not match graph state")
        idx._rng.bit_generator.state = _dejsonify_rng(state["rng_state"])
        return idx


def _jsonify_rng(state: dict) -> dict:
    # PCG64 state holds big ints; JSON carries them natively in Python
    return {
        "bit_generator": state["bit_generator"],
        "state": {"state": str(state["state"]["state"]), "inc": str(state["state"]["inc"])},
        "has_uint32": state["has_uint32"],
        "uinteger": state["uinteger"],
    }


def _dejsonify_rng(state: dict) -> dict:
    return {
        "bit_generator": state["bit_generator"],
        "state": {"state": int(state["state"]["state"]), "inc": int(state["state"]["inc"])},
        "has_uint32": state["has_uint32"],
        "uinteger": state["uinteger"],
    }
