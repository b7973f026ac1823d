"""Relation-path collection: distance-guided DFS and a random-walk baseline."""

from __future__ import annotations

import logging
import random
from collections import Counter
from operator import itemgetter

from joblib import Parallel, delayed

from .distance import parse_header

logger = logging.getLogger(__name__)

_by_distance = itemgetter(0)


class PathStore:
    """Relation-path occurrence counts keyed by ``(head type, relation)``."""

    def __init__(self, meta=None):
        self._buckets: dict[tuple[int, int], Counter] = {}
        self.meta: dict[str, str] = dict(meta or {})

    def add(self, type_id: int, relation: int, path: tuple[int, ...], count: int = 1):
        bucket = self._buckets.get((type_id, relation))
        if bucket is None:
            bucket = self._buckets[(type_id, relation)] = Counter()
        bucket[tuple(path)] += count

    def update(self, other: "PathStore") -> None:
        for key, bucket in other._buckets.items():
            self._buckets.setdefault(key, Counter()).update(bucket)

    def paths(self, type_id: int, relation: int) -> Counter:
        return self._buckets.get((type_id, relation), Counter())

    def keys(self):
        return sorted(self._buckets)

    def items(self):
        for key in self.keys():
            yield key, self._buckets[key]

    def relation_paths(self, relation: int) -> set[tuple[int, ...]]:
        """Distinct paths for ``relation`` across all head types."""
        out = set()
        for (_, r), bucket in self._buckets.items():
            if r == relation:
                out.update(bucket)
        return out

    def distinct(self) -> set[tuple[int, tuple[int, ...]]]:
        return {(r, p) for (_, r), bucket in self._buckets.items() for p in bucket}

    def __len__(self):
        return sum(len(b) for b in self._buckets.values())

    def __bool__(self):
        return bool(self._buckets)

    def __eq__(self, other):
        if not isinstance(other, PathStore):
            return NotImplemented
        mine = {k: v for k, v in self._buckets.items() if v}
        theirs = {k: v for k, v in other._buckets.items() if v}
        return mine == theirs

    def save(self, path, kg) -> None:
        """TSV ``type<TAB>relation<TAB>r1,r2,...<TAB>count`` using names."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# " + "\t".join(f"{k}={v}" for k, v in sorted(self.meta.items())) + "\n")
            for (c, r), bucket in self.items():
                for p in sorted(bucket):
                    rels = ",".join(kg.relations[x] for x in p)
                    fh.write(f"{kg.type_names[c]}\t{kg.relations[r]}\t{rels}\t{bucket[p]}\n")

    @classmethod
    def load(cls, path, kg) -> "PathStore":
        type_index = {name: i for i, name in enumerate(kg.type_names)}
        with open(path, encoding="utf-8") as fh:
            store = cls(meta=parse_header(fh.readline()))
            for line in fh:
                c, r, rels, count = line.rstrip("\n").split("\t")
                p = tuple(kg.relation_index[x] for x in rels.split(","))
                store.add(type_index[c], kg.relation_index[r], p, int(count))
        return store


def _search(kg, dist_to_t, h, r, t, l_max, k, exclude_target_edge, found):
    """Distance-pruned DFS from ``h`` to ``t``; returns number of pushed states.

    Completed relation sequences are appended to ``found``.
    """
    stack = [(h, (), (h,))]
    pushed = 1
    while stack:
        u, path, visited = stack.pop()
        if u == t:
            found.append(path)
            continue
        budget = l_max - len(path) - 1
        if budget < 0:
            continue
        candidates = []
        for rel, v in kg.neighbors(u):
            if v in visited:
                continue
            d = dist_to_t.get(v)
            if d is None or d > budget:
                continue
            if exclude_target_edge and u == h and v == t and rel == r:
                continue
            candidates.append((d, rel, v))
        # stable: equal distances keep adjacency order
        candidates.sort(key=_by_distance)
        if k is not None and len(candidates) > k:
            del candidates[k:]
        for _, rel, v in reversed(candidates):
            stack.append((v, path + (rel,), visited + (v,)))
            pushed += 1
    return pushed


def _collect_chunk(kg, index, triples, l_max, k, exclude_target_edge):
    store = PathStore()
    for h, r, t in triples:
        if h == t:
            continue
        found = []
        _search(kg, index.distances_to(t), h, r, t, l_max, k, exclude_target_edge, found)
        c = kg.entity_type(h)
        for p in found:
            store.add(c, r, p)
    return store


def _chunks(items, n):
    size = max(1, -(-len(items) // n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _check_l_max(index, l_max):
    if l_max is None:
        return index.l_max
    if l_max > index.l_max:
        raise ValueError(
            f"distance index built with l_max={index.l_max} cannot prune paths "
            f"of length {l_max}")
    return l_max


def collect_paths(kg, index, l_max=None, k=None, triples=None,
                  exclude_target_edge=True, n_jobs=1) -> PathStore:
    """Collect type-specific relation paths for each training triple.

    Parameters
    ----------
    kg : KnowledgeGraph
    index : DistanceIndex
    l_max : int, optional
        Defaults to the index's ``l_max``.
    k : int or None
        Maximum branch number; None disables top-k truncation.
    triples : iterable of (h, r, t), optional
        Defaults to ``kg.train``.
    exclude_target_edge : bool
        Skip the edge ``(h, r, t)`` itself while searching for that triple.
    n_jobs : int
    """
    l_max = _check_l_max(index, l_max)
    if k is not None and k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    triples = list(kg.train if triples is None else triples)
    meta = {"mode": "dg", "l_max": l_max, "k": k if k is not None else "inf",
            "exclude_target_edge": int(bool(exclude_target_edge))}
    if n_jobs == 1 or len(triples) < 2:
        store = _collect_chunk(kg, index, triples, l_max, k, exclude_target_edge)
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_collect_chunk)(kg, index, chunk, l_max, k, exclude_target_edge)
            for chunk in _chunks(triples, abs(n_jobs) * 4))
        store = PathStore()
        for part in parts:
            store.update(part)
    store.meta = {key: str(v) for key, v in meta.items()}
    logger.info("collected %d distinct type-specific paths from %d triples",
                len(store), len(triples))
    return store


def dfs_state_count(kg, index, triple, l_max=None, k=None,
                    exclude_target_edge=True) -> int:
    """Number of states pushed by the pruned DFS for one triple."""
    l_max = _check_l_max(index, l_max)
    h, r, t = triple
    return _search(kg, index.distances_to(t), h, r, t, l_max, k,
                   exclude_target_edge, [])


def _walk_chunk(kg, indexed_triples, l_max, walks_per_triple, seed, exclude_target_edge):
    store = PathStore()
    for i, (h, r, t) in indexed_triples:
        if h == t:
            continue
        rng = random.Random(f"{seed}:{i}")
        c = kg.entity_type(h)
        first = kg.neighbors(h)
        if exclude_target_edge:
            first = [(rel, v) for rel, v in first if not (rel == r and v == t)]
        for _ in range(walks_per_triple):
            u, path, nbrs = h, [], first
            for _ in range(l_max):
                if not nbrs:
                    break
                rel, u = nbrs[rng.randrange(len(nbrs))]
                path.append(rel)
                if u == t:
                    store.add(c, r, tuple(path))
                    break
                nbrs = kg.neighbors(u)
                if exclude_target_edge and u == h:
                    nbrs = first
    return store


def collect_paths_random_walk(kg, l_max, walks_per_triple, seed=0, triples=None,
                              exclude_target_edge=True, n_jobs=1) -> PathStore:
    """Uniform random walks from each head; walks hitting the tail record their path.

    Each triple draws from its own generator seeded by ``(seed, position)``, so
    the result does not depend on ``n_jobs``.
    """
    if walks_per_triple < 1:
        raise ValueError(f"walks_per_triple must be >= 1, got {walks_per_triple}")
    triples = list(enumerate(kg.train if triples is None else triples))
    if n_jobs == 1 or len(triples) < 2:
        store = _walk_chunk(kg, triples, l_max, walks_per_triple, seed, exclude_target_edge)
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_walk_chunk)(kg, chunk, l_max, walks_per_triple, seed,
                                 exclude_target_edge)
            for chunk in _chunks(triples, abs(n_jobs) * 4))
        store = PathStore()
        for part in parts:
            store.update(part)
    store.meta = {"mode": "rw", "l_max": str(l_max), "walks": str(walks_per_triple),
                  "seed": str(seed), "exclude_target_edge": str(int(bool(exclude_target_edge)))}
    return store
