"""Truncated BFS distances used to prune path search."""

from __future__ import annotations

import gzip
import math
from collections import deque

INF = math.inf


class DistanceIndex:
    """Per-entity sparse hop counts, ``dist[u][v] <= l_max`` only.

    In the default (undirected) mode BFS follows inverse-augmented adjacency, so
    the index is symmetric. With ``directed=True`` only base-relation edges are
    followed and ``distance(u, v)`` is the forward hop count from ``u`` to ``v``.
    """

    def __init__(self, l_max, forward, backward=None, directed=False):
        self.l_max = l_max
        self.directed = directed
        self._forward: list[dict[int, int]] = forward
        # backward[v][u] = dist[u][v]; shares storage when symmetric
        self._backward: list[dict[int, int]] = backward if directed else forward

    @property
    def n_entities(self) -> int:
        return len(self._forward)

    def distance(self, u: int, v: int) -> float:
        return self._forward[u].get(v, INF)

    def distances_from(self, u: int) -> dict[int, int]:
        return self._forward[u]

    def distances_to(self, t: int) -> dict[int, int]:
        """Map ``v -> dist[v][t]`` for every ``v`` within ``l_max`` of ``t``."""
        return self._backward[t]

    def __len__(self):
        return sum(len(m) for m in self._forward)

    def __eq__(self, other):
        if not isinstance(other, DistanceIndex):
            return NotImplemented
        return (self.l_max == other.l_max and self.directed == other.directed
                and self._forward == other._forward)

    def save(self, path) -> None:
        """Gzip TSV ``u<TAB>v<TAB>d``; symmetric indexes keep only ``u <= v``."""
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(f"# l_max={self.l_max}\tdirected={int(self.directed)}"
                     f"\tn_entities={self.n_entities}\n".encode())
            lines = []
            for u, dmap in enumerate(self._forward):
                for v in sorted(dmap):
                    if self.directed or u <= v:
                        lines.append(f"{u}\t{v}\t{dmap[v]}\n")
                if len(lines) > 65536:
                    gz.write("".join(lines).encode())
                    lines = []
            gz.write("".join(lines).encode())

    @classmethod
    def load(cls, path) -> "DistanceIndex":
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            header = parse_header(fh.readline())
            l_max = int(header["l_max"])
            directed = bool(int(header.get("directed", 0)))
            n = int(header["n_entities"])
            forward = [{} for _ in range(n)]
            backward = [{} for _ in range(n)] if directed else forward
            for line in fh:
                u, v, d = map(int, line.split("\t"))
                forward[u][v] = d
                if directed:
                    backward[v][u] = d
                else:
                    forward[v][u] = d
        return cls(l_max, forward, backward, directed=directed)


def parse_header(line: str) -> dict[str, str]:
    if not line.startswith("#"):
        raise ValueError("artifact is missing its header line")
    fields = {}
    for item in line[1:].strip().split("\t"):
        key, _, value = item.strip().partition("=")
        fields[key] = value
    return fields


def _bfs(adjacency, source, l_max):
    dist = {source: 0}
    frontier = deque([source])
    while frontier:
        u = frontier.popleft()
        d = dist[u]
        if d == l_max:
            continue
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = d + 1
                frontier.append(v)
    return dist


def build_distance_index(kg, l_max: int, directed: bool = False) -> DistanceIndex:
    """Run a depth-limited BFS from every entity.

    Parameters
    ----------
    kg : KnowledgeGraph
    l_max : int
        Maximum hop count recorded; farther entities are treated as unreachable.
    directed : bool
        Follow only base-relation edges. Off by default because collected paths
        may use inverse relations.
    """
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    n = kg.n_entities
    if directed:
        fwd_adj = [sorted({v for rel, v in kg.neighbors(u) if not kg.is_inverse(rel)})
                   for u in range(n)]
        bwd_adj = [sorted({v for rel, v in kg.neighbors(u) if kg.is_inverse(rel)})
                   for u in range(n)]
        forward = [_bfs(fwd_adj, u, l_max) for u in range(n)]
        backward = [_bfs(bwd_adj, u, l_max) for u in range(n)]
        return DistanceIndex(l_max, forward, backward, directed=True)
    adj = [list(dict.fromkeys(v for _, v in kg.neighbors(u))) for u in range(n)]
    forward = [_bfs(adj, u, l_max) for u in range(n)]
    return DistanceIndex(l_max, forward)


def distance(index: DistanceIndex, u: int, v: int) -> float:
    """Recorded hop count from ``u`` to ``v``, or ``math.inf``."""
    return index.distance(u, v)
