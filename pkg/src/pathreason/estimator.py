"""scikit-learn style facade over collection, statistics and reasoning."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .collect import collect_paths, collect_paths_random_walk
from .distance import build_distance_index
from .evaluate import evaluate
from .reasoner import Query, ReasonerConfig, RelationModel, answer_query
from .stats import (
    RelationPathStats,
    compute_joint_probabilities,
    compute_path_probabilities,
)
from .validation import check_graph, check_id_array


def training_triples(kg, with_inverse=False):
    triples = list(kg.train)
    if with_inverse:
        triples += [(t, kg.inverse(r), h) for h, r, t in kg.train]
    return triples


class PathReasoner(BaseEstimator):
    """Training-free relation-path reasoner for ``(h, r, ?)`` queries.

    ``fit`` collects relation paths from the graph's training triples and
    estimates path and joint-path probabilities; ``predict``/``rank_candidates``
    answer queries given as ``(head, relation)`` id rows.

    Parameters
    ----------
    l_max : int
        Maximum path length.
    k : int or None
        Maximum branch number of the distance-guided search (None = unbounded).
    alpha, beta : float
        Hop decay and repeat-diminishing factors, both in (0, 1).
    n_top : int
        Number of productive paths executed per query.
    m_inter : int
        Size of the per-relation pool used for joint statistics.
    collection : {"dg", "rw"}
        Distance-guided search or uniform random walks.
    walks_per_triple, seed : int
        Random-walk settings, ignored for ``"dg"``.
    exclude_target_edge : bool
        Leave each training edge out while collecting/scoring paths for it.
    count_mode : {"walks", "entities"}
    use_intra, use_inter : bool
        Ablation switches for the repeat and pairwise adjustments.
    inverse_queries : bool
        Also learn paths for inverse relations so ``(t, r_inv, ?)`` can be answered.
    n_jobs : int
    """

    def __init__(self, l_max=3, k=30, alpha=0.8, beta=0.5, n_top=200, m_inter=200,
                 collection="dg", walks_per_triple=100, seed=0,
                 exclude_target_edge=True, count_mode="walks", use_intra=True,
                 use_inter=True, inverse_queries=False, n_jobs=1):
        self.l_max = l_max
        self.k = k
        self.alpha = alpha
        self.beta = beta
        self.n_top = n_top
        self.m_inter = m_inter
        self.collection = collection
        self.walks_per_triple = walks_per_triple
        self.seed = seed
        self.exclude_target_edge = exclude_target_edge
        self.count_mode = count_mode
        self.use_intra = use_intra
        self.use_inter = use_inter
        self.inverse_queries = inverse_queries
        self.n_jobs = n_jobs

    def reasoner_config(self) -> ReasonerConfig:
        return ReasonerConfig(alpha=self.alpha, beta=self.beta, n_top=self.n_top,
                              m_inter=self.m_inter, l_max=self.l_max, k=self.k,
                              use_intra=self.use_intra, use_inter=self.use_inter)

    def fit(self, X, y=None, distance_index=None):
        """Collect paths and estimate statistics over ``X.train``.

        ``distance_index`` may be supplied to skip the BFS precomputation.
        """
        kg = check_graph(X)
        self.reasoner_config()
        if self.collection not in ("dg", "rw"):
            raise ValueError(f"collection must be 'dg' or 'rw', got {self.collection!r}")
        triples = training_triples(kg, self.inverse_queries)

        if self.collection == "dg":
            if distance_index is None:
                distance_index = build_distance_index(kg, self.l_max)
            self.distance_index_ = distance_index
            self.paths_ = collect_paths(kg, distance_index, self.l_max, self.k, triples,
                                        self.exclude_target_edge, self.n_jobs)
        else:
            self.distance_index_ = None
            self.paths_ = collect_paths_random_walk(
                kg, self.l_max, self.walks_per_triple, self.seed, triples,
                self.exclude_target_edge, self.n_jobs)
        return self._fit_statistics(kg, triples)

    def _fit_statistics(self, kg, triples):
        if self.paths_:
            self.stats_ = compute_path_probabilities(
                kg, self.paths_, triples, self.exclude_target_edge, self.count_mode)
        else:
            self.stats_ = RelationPathStats()
        self.joints_ = compute_joint_probabilities(
            kg, self.stats_, self.alpha, self.m_inter, triples, self.exclude_target_edge)
        self.graph_ = kg
        self._models = {}
        return self

    @classmethod
    def from_artifacts(cls, kg, stats, joints, **params):
        """Wrap precomputed statistics without re-running collection."""
        est = cls(**params)
        est.graph_ = kg
        est.distance_index_ = None
        est.paths_ = None
        est.stats_ = stats
        est.joints_ = joints
        est._models = {}
        return est

    def _model(self, r, cfg):
        model = self._models.get(r)
        if model is None:
            model = self._models[r] = RelationModel(self.stats_, self.joints_, r, cfg)
        return model

    def answer(self, head: int, relation: int):
        """Ranked :class:`CandidateAnswer` list for one query."""
        check_is_fitted(self, "stats_")
        cfg = self.reasoner_config()
        if relation not in self.stats_:
            return []
        return answer_query(self.graph_, self.stats_, self.joints_, Query(head, relation),
                            cfg, model=self._model(relation, cfg))

    def rank_candidates(self, X):
        check_is_fitted(self, "stats_")
        queries = check_id_array(X, self.graph_, 2)
        return [self.answer(int(h), int(r)) for h, r in queries]

    def predict(self, X):
        """Top-ranked tail id per query row, ``-1`` when nothing is reached."""
        ranked = self.rank_candidates(X)
        return np.array([c[0].entity if c else -1 for c in ranked], dtype=np.int64)

    def evaluate(self, X, known=None, filtered=True, both_directions=False):
        check_is_fitted(self, "stats_")
        triples = check_id_array(X, self.graph_, 3)
        self._models = {}
        return evaluate(self.graph_, self.stats_, self.joints_,
                        [tuple(map(int, row)) for row in triples], self.reasoner_config(),
                        known=known, filtered=filtered, both_directions=both_directions)

    def score(self, X, y=None, known=None):
        """Filtered MRR over test triples ``X``."""
        return self.evaluate(X, known=known).mrr
