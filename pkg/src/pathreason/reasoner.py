"""Query answering by executing ranked relation paths and combining their evidence."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .probability import (
    EPS,
    combine_likelihood_ratio,
    hop_adjusted,
    inter_probability,
    intra_probability,
    noisy_or_update,
)
from .stats import rank_relation_paths, traverse_path

__all__ = [
    "ReasonerConfig", "Query", "ScoredPath", "CandidateAnswer", "RelationModel",
    "hop_adjusted", "rank_relation_paths", "intra_probability", "likelihood_ratio",
    "inter_probability", "answer_query",
]


@dataclass(frozen=True)
class ReasonerConfig:
    alpha: float = 0.8
    beta: float = 0.5
    n_top: int = 200
    m_inter: int = 200
    l_max: int = 3
    k: int | None = 30
    eps: float = EPS
    use_intra: bool = True
    use_inter: bool = True

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.n_top < 1:
            raise ValueError(f"n_top must be >= 1, got {self.n_top}")
        if self.m_inter < 2:
            raise ValueError(f"m_inter must be >= 2, got {self.m_inter}")
        if self.l_max < 1:
            raise ValueError(f"l_max must be >= 1, got {self.l_max}")
        if self.k is not None and self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.eps < 0.5:
            raise ValueError(f"eps must lie in (0, 0.5), got {self.eps}")


@dataclass(frozen=True)
class Query:
    head: int
    relation: int


@dataclass
class ScoredPath:
    path: tuple
    p: float
    p_hop: float
    occurrences: int
    p_intra: float
    lr: float
    prior_odds: float
    posterior_odds: float
    p_inter: float

    def to_dict(self, kg=None):
        out = asdict(self)
        out["path"] = [kg.relations[x] for x in self.path] if kg else list(self.path)
        return out


@dataclass
class CandidateAnswer:
    entity: int
    probability: float = 0.0
    paths: list[ScoredPath] = field(default_factory=list)


def likelihood_ratio(p_i, pool, stats, joints, r) -> float:
    """Evidence from stronger pool paths that co-occurred with ``p_i``.

    ``pool`` is a hop-ranked list of ``(path, p_hop)``. Only paths with strictly
    larger hop-adjusted probability and a recorded joint entry contribute.
    """
    p_i = tuple(p_i)
    hop_i = None
    for path, p_hop in pool:
        if path == p_i:
            hop_i = p_hop
            break
    if hop_i is None:
        return 1.0
    prob_i = stats.probability(r, p_i)
    joint, p_js = [], []
    for path, p_hop in pool:
        if p_hop <= hop_i:
            continue
        entry = joints.get(r, p_i, path)
        if entry is None:
            continue
        joint.append(entry[0] / entry[1])
        p_js.append(stats.probability(r, path))
    return combine_likelihood_ratio(joint, prob_i, p_js)


class RelationModel:
    """Ranked paths and their likelihood ratios for one relation."""

    def __init__(self, stats, joints, r, cfg: ReasonerConfig):
        self.relation = r
        self.ranked = rank_relation_paths(stats, r, cfg.alpha)
        self.raw = {p: stats.probability(r, p) for p, _ in self.ranked}
        self.lr = {}
        if cfg.use_inter and joints is not None:
            pool = self.ranked[:cfg.m_inter]
            for p, _ in pool:
                self.lr[p] = likelihood_ratio(p, pool, stats, joints, r)


def _score_path(path, p, p_hop, occurrences, lr, cfg):
    if not cfg.use_intra:
        occurrences = 1
    if not cfg.use_inter:
        lr = 1.0
    p_intra = intra_probability(p_hop, occurrences, cfg.beta, cfg.eps)
    prior = p_intra / (1.0 - p_intra)
    p_inter = inter_probability(p_intra, lr, cfg.eps)
    return ScoredPath(path=path, p=p, p_hop=p_hop, occurrences=occurrences,
                      p_intra=p_intra, lr=lr, prior_odds=prior,
                      posterior_odds=prior * lr, p_inter=p_inter)


def answer_query(kg, stats, joints, query, cfg: ReasonerConfig | None = None,
                 model: RelationModel | None = None) -> list[CandidateAnswer]:
    """Rank candidate tails for ``(head, relation, ?)``.

    Paths are tried in hop-ranked order until ``cfg.n_top`` of them reach at
    least one entity. Every (path, candidate) hit contributes its odds-updated
    probability to the candidate through noisy-or. Pass a prebuilt ``model`` to
    reuse likelihood ratios across queries on the same relation.
    """
    cfg = cfg or ReasonerConfig()
    head, r = query.head, query.relation
    if r not in stats:
        return []
    if model is None:
        model = RelationModel(stats, joints, r, cfg)

    hits: dict[int, list] = {}
    executed = 0
    for path, p_hop in model.ranked:
        reach = traverse_path(kg, head, path)
        if not reach:
            continue
        for entity, times in reach.items():
            hits.setdefault(entity, []).append((path, p_hop, times))
        executed += 1
        if executed == cfg.n_top:
            break

    answers = []
    for entity, supports in hits.items():
        cand = CandidateAnswer(entity)
        for path, p_hop, times in supports:
            scored = _score_path(path, model.raw[path], p_hop, times,
                                 model.lr.get(path, 1.0), cfg)
            cand.paths.append(scored)
            cand.probability = noisy_or_update(cand.probability, scored.p_inter)
        answers.append(cand)
    answers.sort(key=lambda c: (-c.probability, c.entity))
    return answers


def explain(kg, query, answers, top=10) -> dict:
    """JSON-ready answer record with per-path score breakdowns."""
    return {
        "head": kg.entities[query.head],
        "relation": kg.relations[query.relation],
        "candidates": [
            {
                "entity": kg.entities[c.entity],
                "probability": c.probability,
                "paths": [sp.to_dict(kg) for sp in
                          sorted(c.paths, key=lambda sp: -sp.p_inter)],
            }
            for c in answers[:top]
        ],
    }
