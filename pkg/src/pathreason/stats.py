"""Path and joint-path reliability estimated by traversing training triples."""

from __future__ import annotations

import logging
from collections import defaultdict

import numpy as np

from .distance import parse_header
from .probability import hop_adjusted

logger = logging.getLogger(__name__)

COUNT_MODES = ("walks", "entities")


def traverse_path(kg, h: int, path, exclude=None) -> dict[int, int]:
    """Entities reachable from ``h`` along ``path`` with their walk counts.

    ``exclude`` is an optional base triple ``(h, r, t)``; that edge and its
    inverse are skipped. An empty dict means the path dead-ends.
    """
    cur = {h: 1}
    if exclude is not None:
        xh, xr, xt = exclude
        xinv = kg.inverse(xr)
    for rel in path:
        nxt: dict[int, int] = {}
        for e0, count in cur.items():
            succ = kg.successors(e0, rel)
            if not succ:
                continue
            skip = None
            if exclude is not None:
                if e0 == xh and rel == xr:
                    skip = xt
                elif e0 == xt and rel == xinv:
                    skip = xh
            for e1 in succ:
                if e1 == skip:
                    continue
                nxt[e1] = nxt.get(e1, 0) + count
        cur = nxt
        if not cur:
            break
    return cur


def _format_path(kg, path):
    return ",".join(kg.relations[x] for x in path)


def _parse_path(kg, text):
    return tuple(kg.relation_index[x] for x in text.split(","))


class RelationPathStats:
    """Per-relation success/total reach counts ``(S, T)`` for each path."""

    def __init__(self, counts=None, meta=None):
        self._counts: dict[int, dict[tuple, tuple[int, int]]] = counts or {}
        self.meta: dict[str, str] = dict(meta or {})

    def relations(self) -> list[int]:
        return sorted(self._counts)

    def paths(self, r: int) -> dict[tuple, tuple[int, int]]:
        return self._counts.get(r, {})

    def counts(self, r: int, path) -> tuple[int, int]:
        return self._counts[r][tuple(path)]

    def probability(self, r: int, path) -> float:
        s, t = self._counts[r][tuple(path)]
        return s / t

    def __contains__(self, r):
        return r in self._counts

    def __len__(self):
        return sum(len(v) for v in self._counts.values())

    def __eq__(self, other):
        if not isinstance(other, RelationPathStats):
            return NotImplemented
        return self._counts == other._counts

    def save(self, path, kg) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# " + "\t".join(f"{k}={v}" for k, v in sorted(self.meta.items())) + "\n")
            for r in self.relations():
                for p in sorted(self._counts[r]):
                    s, t = self._counts[r][p]
                    fh.write(f"{kg.relations[r]}\t{_format_path(kg, p)}\t{s}\t{t}\n")

    @classmethod
    def load(cls, path, kg) -> "RelationPathStats":
        counts: dict[int, dict] = {}
        with open(path, encoding="utf-8") as fh:
            meta = parse_header(fh.readline())
            for line in fh:
                r, p, s, t = line.rstrip("\n").split("\t")
                counts.setdefault(kg.relation_index[r], {})[_parse_path(kg, p)] = (int(s), int(t))
        return cls(counts, meta)


class JointStats:
    """Co-occurrence counts ``(JS, JT)`` for unordered path pairs per relation."""

    def __init__(self, counts=None, meta=None):
        self._counts: dict[int, dict[tuple, tuple[int, int]]] = counts or {}
        self.meta: dict[str, str] = dict(meta or {})

    @staticmethod
    def key(p_i, p_j):
        p_i, p_j = tuple(p_i), tuple(p_j)
        return (p_i, p_j) if p_i <= p_j else (p_j, p_i)

    def get(self, r: int, p_i, p_j):
        """``(JS, JT)`` or None when the pair never co-occurred."""
        return self._counts.get(r, {}).get(self.key(p_i, p_j))

    def probability(self, r: int, p_i, p_j):
        entry = self.get(r, p_i, p_j)
        if entry is None:
            return None
        return entry[0] / entry[1]

    def pairs(self, r: int):
        return self._counts.get(r, {})

    def relations(self):
        return sorted(self._counts)

    def __len__(self):
        return sum(len(v) for v in self._counts.values())

    def __eq__(self, other):
        if not isinstance(other, JointStats):
            return NotImplemented
        return self._counts == other._counts

    def save(self, path, kg) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# " + "\t".join(f"{k}={v}" for k, v in sorted(self.meta.items())) + "\n")
            for r in self.relations():
                for (a, b) in sorted(self._counts[r]):
                    js, jt = self._counts[r][(a, b)]
                    fh.write(f"{kg.relations[r]}\t{_format_path(kg, a)}\t"
                             f"{_format_path(kg, b)}\t{js}\t{jt}\n")

    @classmethod
    def load(cls, path, kg) -> "JointStats":
        counts: dict[int, dict] = {}
        with open(path, encoding="utf-8") as fh:
            meta = parse_header(fh.readline())
            for line in fh:
                r, a, b, js, jt = line.rstrip("\n").split("\t")
                key = cls.key(_parse_path(kg, a), _parse_path(kg, b))
                counts.setdefault(kg.relation_index[r], {})[key] = (int(js), int(jt))
        return cls(counts, meta)


def compute_path_probabilities(kg, store, triples=None, exclude_target_edge=True,
                               count_mode="walks") -> RelationPathStats:
    """Traverse every collected path from the heads of matching training triples.

    For triple ``(h, r, t)`` each path in the ``(type(h), r)`` bucket adds the
    number of reach events to ``T`` and those landing on ``t`` to ``S``; counts
    are then pooled over head types. ``count_mode="entities"`` counts distinct
    reached entities instead of walks.
    """
    if count_mode not in COUNT_MODES:
        raise ValueError(f"count_mode must be one of {COUNT_MODES}, got {count_mode!r}")
    if not store:
        raise ValueError("path store is empty")
    triples = kg.train if triples is None else triples
    s_acc: dict[int, dict] = defaultdict(lambda: defaultdict(int))
    t_acc: dict[int, dict] = defaultdict(lambda: defaultdict(int))
    distinct = count_mode == "entities"
    for h, r, t in triples:
        bucket = store.paths(kg.entity_type(h), r)
        if not bucket:
            continue
        exclude = (h, r, t) if exclude_target_edge else None
        for p in bucket:
            reach = traverse_path(kg, h, p, exclude)
            if not reach:
                continue
            if distinct:
                t_acc[r][p] += len(reach)
                s_acc[r][p] += int(t in reach)
            else:
                t_acc[r][p] += sum(reach.values())
                s_acc[r][p] += reach.get(t, 0)
    counts = {}
    for r, totals in t_acc.items():
        per = {p: (s_acc[r][p], total) for p, total in totals.items()
               if total > 0 and s_acc[r][p] > 0}
        if per:
            counts[r] = per
    stats = RelationPathStats(counts, meta={
        "count_mode": count_mode,
        "exclude_target_edge": str(int(bool(exclude_target_edge))),
        **{f"store_{k}": v for k, v in store.meta.items()},
    })
    logger.info("path statistics: %d paths over %d relations", len(stats), len(counts))
    return stats


def rank_relation_paths(stats, r: int, alpha: float) -> list[tuple[tuple, float]]:
    """Paths of ``r`` by decreasing hop-adjusted probability.

    Ties go to the shorter path, then to lexicographic relation-id order.
    """
    ranked = [(p, hop_adjusted(s / t, len(p), alpha))
              for p, (s, t) in stats.paths(r).items()]
    ranked.sort(key=lambda item: (-item[1], len(item[0]), item[0]))
    return ranked


def compute_joint_probabilities(kg, stats, alpha, m_inter=200, triples=None,
                                exclude_target_edge=True) -> JointStats:
    """Pairwise co-occurrence among each relation's top ``m_inter`` paths.

    Per training triple, a pair counts toward ``JT`` when both paths execute
    from the head and toward ``JS`` when both also reach the tail.
    """
    if m_inter < 2:
        raise ValueError(f"m_inter must be >= 2, got {m_inter}")
    triples = kg.train if triples is None else triples
    by_relation = defaultdict(list)
    for triple in triples:
        by_relation[triple[1]].append(triple)

    counts = {}
    for r in sorted(by_relation):
        if r not in stats:
            continue
        pool = [p for p, _ in rank_relation_paths(stats, r, alpha)[:m_inter]]
        if len(pool) < 2:
            continue
        rows = by_relation[r]
        executed = np.zeros((len(rows), len(pool)), dtype=np.int64)
        correct = np.zeros_like(executed)
        for i, (h, _, t) in enumerate(rows):
            exclude = (h, r, t) if exclude_target_edge else None
            for j, p in enumerate(pool):
                reach = traverse_path(kg, h, p, exclude)
                if reach:
                    executed[i, j] = 1
                    if t in reach:
                        correct[i, j] = 1
        jt = executed.T @ executed
        js = correct.T @ correct
        per = {}
        for a, b in zip(*np.triu_indices(len(pool), k=1)):
            if jt[a, b] > 0:
                per[JointStats.key(pool[a], pool[b])] = (int(js[a, b]), int(jt[a, b]))
        if per:
            counts[r] = per
    joints = JointStats(counts, meta={"alpha": str(alpha), "m_inter": str(m_inter),
                                      "exclude_target_edge": str(int(bool(exclude_target_edge)))})
    logger.info("joint statistics: %d path pairs", len(joints))
    return joints
