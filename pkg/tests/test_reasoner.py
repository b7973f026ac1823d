import pytest

from pathreason.kg import KnowledgeGraph
from pathreason.probability import EPS, clamp, noisy_or
from pathreason.reasoner import (
    Query,
    ReasonerConfig,
    RelationModel,
    answer_query,
    explain,
    likelihood_ratio,
)
from pathreason.stats import JointStats, RelationPathStats, rank_relation_paths, traverse_path


def _graph():
    # two one-hop paths a and b from h; c reaches two entities twice
    rows = [("h", "a", "x"), ("h", "b", "x"), ("h", "b", "y"),
            ("h", "c", "m1"), ("h", "c", "m2"), ("m1", "d", "y"), ("m2", "d", "y")]
    kg, _ = KnowledgeGraph.from_triples(rows, test=[("h", "R", "x")])
    return kg


def ids(kg, *names):
    return tuple(kg.relation_id(n) for n in names)


class TestConfig:
    @pytest.mark.parametrize("kwargs", [dict(alpha=0), dict(alpha=1), dict(beta=1.5),
                                        dict(n_top=0), dict(m_inter=1), dict(k=0)])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            ReasonerConfig(**kwargs)


class TestLikelihoodRatio:
    def setup_method(self):
        self.kg = _graph()
        self.R = self.kg.relation_id("R")
        self.pi, self.pj = ids(self.kg, "a"), ids(self.kg, "b")

    def test_worked_value(self):
        stats = RelationPathStats({self.R: {self.pi: (1, 5), self.pj: (1, 4)}})
        joints = JointStats({self.R: {JointStats.key(self.pi, self.pj): (3, 10)}})
        pool = rank_relation_paths(stats, self.R, 0.8)
        assert pool[0][0] == self.pj
        expected = 0.3 / (0.2 + 0.25 - 0.2 * 0.25)
        assert abs(likelihood_ratio(self.pi, pool, stats, joints, self.R) - expected) < 1e-12
        # the stronger path has no stronger partner
        assert likelihood_ratio(self.pj, pool, stats, joints, self.R) == 1.0

    def test_pair_without_joint_entry_ignored(self):
        stats = RelationPathStats({self.R: {self.pi: (1, 5), self.pj: (1, 4)}})
        pool = rank_relation_paths(stats, self.R, 0.8)
        assert likelihood_ratio(self.pi, pool, stats, JointStats(), self.R) == 1.0

    def test_equal_hop_not_counted(self):
        stats = RelationPathStats({self.R: {self.pi: (1, 4), self.pj: (1, 4)}})
        joints = JointStats({self.R: {JointStats.key(self.pi, self.pj): (1, 10)}})
        pool = rank_relation_paths(stats, self.R, 0.8)
        for p, _ in pool:
            assert likelihood_ratio(p, pool, stats, joints, self.R) == 1.0

    def test_outside_pool(self):
        stats = RelationPathStats({self.R: {self.pi: (1, 5)}})
        assert likelihood_ratio(self.pj, [], stats, JointStats(), self.R) == 1.0


class TestAnswerQuery:
    def setup_method(self):
        self.kg = _graph()
        self.R = self.kg.relation_id("R")
        self.q = Query(self.kg.entity_id("h"), self.R)

    def test_two_supporting_paths(self):
        kg = self.kg
        stats = RelationPathStats({self.R: {ids(kg, "a"): (1, 2), ids(kg, "b"): (1, 2)}})
        cfg = ReasonerConfig(alpha=0.5)
        answers = answer_query(kg, stats, JointStats(), self.q, cfg)
        x, y = kg.entity_id("x"), kg.entity_id("y")
        assert [c.entity for c in answers] == [x, y]
        assert abs(answers[0].probability - 0.75) < 1e-12
        assert abs(answers[1].probability - 0.5) < 1e-12

    def test_repeated_path_uses_walk_count(self):
        kg = self.kg
        p = ids(kg, "c", "d")
        stats = RelationPathStats({self.R: {p: (1, 2)}})
        cfg = ReasonerConfig(alpha=0.5, beta=0.5)
        (only,) = answer_query(kg, stats, JointStats(), self.q, cfg)
        assert only.entity == kg.entity_id("y")
        (scored,) = only.paths
        assert scored.occurrences == 2
        p_hop = 0.5 * 0.5
        assert abs(only.probability - (1 - (1 - p_hop) * (1 - 0.5 * p_hop))) < 1e-12

    def test_n_top_counts_productive_paths_only(self):
        kg = self.kg
        stats = RelationPathStats({self.R: {ids(kg, "d"): (9, 10), ids(kg, "a"): (1, 2),
                                            ids(kg, "b"): (1, 3)}})
        answers = answer_query(kg, stats, JointStats(), self.q, ReasonerConfig(n_top=1))
        # "d" dead-ends from h and does not use up the budget; only "a" runs
        assert [c.entity for c in answers] == [kg.entity_id("x")]
        assert [sp.path for sp in answers[0].paths] == [ids(kg, "a")]

    def test_unknown_relation(self):
        assert answer_query(self.kg, RelationPathStats(), JointStats(), self.q) == []

    def test_tie_break_by_entity(self):
        kg = self.kg
        stats = RelationPathStats({self.R: {ids(kg, "b"): (1, 2)}})
        answers = answer_query(kg, stats, JointStats(), self.q)
        assert [c.entity for c in answers] == sorted(c.entity for c in answers)

    def test_dominance_and_closed_form(self):
        kg = self.kg
        stats = RelationPathStats({self.R: {ids(kg, "a"): (1, 3), ids(kg, "b"): (2, 3),
                                            ids(kg, "c", "d"): (1, 4)}})
        joints = JointStats({self.R: {JointStats.key(ids(kg, "a"), ids(kg, "b")): (2, 3)}})
        for cand in answer_query(kg, stats, joints, self.q):
            ps = [sp.p_inter for sp in cand.paths]
            assert cand.probability >= max(ps)
            assert abs(cand.probability - noisy_or(ps)) < 1e-12
            assert 0 < cand.probability < 1
            for sp in cand.paths:
                assert sp.p_hop <= sp.p
                assert 0 < sp.p_intra < 1 and 0 < sp.p_inter < 1 and sp.lr >= 0

    def test_explain_record(self):
        kg = self.kg
        stats = RelationPathStats({self.R: {ids(kg, "a"): (1, 2)}})
        record = explain(kg, self.q, answer_query(kg, stats, JointStats(), self.q))
        assert record["head"] == "h" and record["relation"] == "R"
        cand = record["candidates"][0]
        assert cand["entity"] == "x"
        assert cand["paths"][0]["path"] == ["a"]
        assert {"p_hop", "p_intra", "p_inter", "lr"} <= set(cand["paths"][0])


class TestAblations:
    def setup_method(self):
        kg = self.kg = _graph()
        self.R = kg.relation_id("R")
        self.q = Query(kg.entity_id("h"), self.R)
        self.stats = RelationPathStats({self.R: {
            ids(kg, "a"): (1, 3), ids(kg, "b"): (2, 3), ids(kg, "c", "d"): (3, 4)}})
        self.joints = JointStats({self.R: {
            JointStats.key(ids(kg, "a"), ids(kg, "b")): (2, 3),
            JointStats.key(ids(kg, "a"), ids(kg, "c", "d")): (1, 3),
            JointStats.key(ids(kg, "b"), ids(kg, "c", "d")): (1, 4)}})

    def _scores(self, joints, **kwargs):
        cfg = ReasonerConfig(alpha=0.7, **kwargs)
        return {c.entity: c.probability for c in answer_query(self.kg, self.stats, joints, self.q, cfg)}

    def test_lr_one_equals_without_inter(self):
        assert self._scores(JointStats()) == self._scores(self.joints, use_inter=False)
        assert self._scores(self.joints) != self._scores(self.joints, use_inter=False)

    def test_single_occurrence_equals_without_intra(self):
        cfg = ReasonerConfig(alpha=0.7)
        model = RelationModel(self.stats, self.joints, self.R, cfg)
        expected = {}
        for path, p_hop in model.ranked:
            for entity in traverse_path(self.kg, self.q.head, path):
                p_intra = clamp(p_hop)
                odds = p_intra / (1 - p_intra) * model.lr.get(path, 1.0)
                expected.setdefault(entity, []).append(clamp(odds / (1 + odds)))
        expected = {e: noisy_or(ps) for e, ps in expected.items()}
        got = self._scores(self.joints, use_intra=False)
        assert got.keys() == expected.keys()
        for e in got:
            assert abs(got[e] - expected[e]) < 1e-12

    def test_both_off_is_hop_ranked_noisy_or(self):
        cfg = ReasonerConfig(alpha=0.7)
        expected = {}
        for path, p_hop in rank_relation_paths(self.stats, self.R, cfg.alpha):
            for entity in traverse_path(self.kg, self.q.head, path):
                expected.setdefault(entity, []).append(clamp(p_hop, EPS))
        expected = {e: noisy_or(ps) for e, ps in expected.items()}
        got = self._scores(self.joints, use_intra=False, use_inter=False)
        assert got.keys() == expected.keys()
        for e in got:
            assert abs(got[e] - expected[e]) < 1e-12
