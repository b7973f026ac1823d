"""Filtered MRR / Hits@K evaluation for tail queries."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .reasoner import Query, RelationModel, ReasonerConfig, answer_query

HITS_AT = (1, 3, 10)


def rank_of_answer(candidates, gold: int, filter_set=()) -> float | None:
    """Mean tie rank of ``gold`` among ``candidates`` after filtering.

    ``candidates`` is a sequence of ``(entity, score)`` pairs or objects with
    ``entity``/``probability`` attributes. Entities in ``filter_set`` other than
    ``gold`` are dropped. Returns None when ``gold`` was not retrieved.
    """
    gold_score = None
    scores = []
    for cand in candidates:
        entity, score = _unpack(cand)
        if entity == gold:
            gold_score = score
        elif entity not in filter_set:
            scores.append(score)
    if gold_score is None:
        return None
    higher = sum(1 for s in scores if s > gold_score)
    ties = sum(1 for s in scores if s == gold_score)
    return 1.0 + higher + ties / 2.0


def _unpack(cand):
    if isinstance(cand, tuple):
        return cand
    return cand.entity, cand.probability


@dataclass
class QueryResult:
    head: int
    relation: int
    gold: int
    rank: float | None

    @property
    def reciprocal(self) -> float:
        return 0.0 if self.rank is None else 1.0 / self.rank


@dataclass
class MetricsReport:
    results: list[QueryResult] = field(default_factory=list)

    @property
    def n_queries(self) -> int:
        return len(self.results)

    @property
    def mrr(self) -> float:
        return math.fsum(q.reciprocal for q in self.results) / self.n_queries

    def hits(self, k: int) -> float:
        return sum(1 for q in self.results if q.rank is not None and q.rank <= k) / self.n_queries

    def as_dict(self) -> dict[str, float]:
        out = {"mrr": self.mrr}
        for k in HITS_AT:
            out[f"hits@{k}"] = self.hits(k)
        out["queries"] = self.n_queries
        out["misses"] = sum(1 for q in self.results if q.rank is None)
        return out

    def to_text(self) -> str:
        d = self.as_dict()
        lines = [f"{'metric':<10}{'value':>10}", "-" * 20,
                 f"{'MRR':<10}{d['mrr']:>10.4f}"]
        for k in HITS_AT:
            lines.append(f"{'Hits@' + str(k):<10}{100 * d[f'hits@{k}']:>9.2f}%")
        lines.append(f"{'queries':<10}{d['queries']:>10d}")
        lines.append(f"{'misses':<10}{d['misses']:>10d}")
        return "\n".join(lines)

    def to_kv(self) -> str:
        return "".join(f"{k} = {v!r}\n" for k, v in self.as_dict().items())

    def to_tsv(self, kg=None) -> str:
        lines = ["head\trelation\tgold\trank"]
        for q in self.results:
            rank = "miss" if q.rank is None else repr(q.rank)
            if kg is None:
                lines.append(f"{q.head}\t{q.relation}\t{q.gold}\t{rank}")
            else:
                lines.append(f"{kg.entities[q.head]}\t{kg.relations[q.relation]}\t"
                             f"{kg.entities[q.gold]}\t{rank}")
        return "\n".join(lines) + "\n"


def known_answers(kg, triples, both_directions=False):
    """``(head, relation) -> set of tails`` over the given id triples."""
    answers = defaultdict(set)
    for h, r, t in triples:
        answers[(h, r)].add(t)
        if both_directions:
            answers[(t, kg.inverse(r))].add(h)
    return answers


def evaluation_queries(kg, test, both_directions=False):
    queries = [(h, r, t) for h, r, t in test]
    if both_directions:
        queries += [(t, kg.inverse(r), h) for h, r, t in test]
    return queries


def evaluate(kg, stats, joints, test, cfg: ReasonerConfig | None = None,
             known=None, filtered=True, both_directions=False) -> MetricsReport:
    """Answer each test triple as ``(h, r, ?)`` and score the gold tail.

    ``known`` holds every ``(h, r, t)`` used for filtering (normally train,
    valid and test); it defaults to ``test`` alone.
    """
    test = list(test)
    if not test:
        raise ValueError("test split is empty")
    cfg = cfg or ReasonerConfig()
    filters = known_answers(kg, test if known is None else known, both_directions)
    models: dict[int, RelationModel] = {}
    report = MetricsReport()
    for h, r, t in evaluation_queries(kg, test, both_directions):
        model = None
        if r in stats:
            model = models.get(r)
            if model is None:
                model = models[r] = RelationModel(stats, joints, r, cfg)
        answers = answer_query(kg, stats, joints, Query(h, r), cfg, model=model)
        filter_set = filters.get((h, r), ()) if filtered else ()
        report.results.append(QueryResult(h, r, t, rank_of_answer(answers, t, filter_set)))
    return report
