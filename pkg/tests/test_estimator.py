import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from pathreason import PathReasoner
from pathreason.kg import KnowledgeGraph
from pathreason.synthetic import make_family_splits
from pathreason.validation import check_id_array


@pytest.fixture(scope="module")
def family():
    train, valid, test = make_family_splits(n_families=60, seed=3)
    return KnowledgeGraph.from_triples(train, valid, test)


@pytest.fixture(scope="module")
def fitted(family):
    kg, _ = family
    return PathReasoner(l_max=2, k=10).fit(kg)


def _query_rows(kg, triples):
    return np.array([[h, r] for h, r, _ in triples])


def test_params_round_trip():
    est = PathReasoner(alpha=0.6, k=None)
    params = est.get_params()
    assert params["alpha"] == 0.6 and params["k"] is None
    est.set_params(beta=0.3)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "stats_")


def test_not_fitted():
    with pytest.raises(NotFittedError):
        PathReasoner().predict([[0, 0]])


@pytest.mark.parametrize("bad", [dict(alpha=1.0), dict(beta=0), dict(collection="bfs"),
                                 dict(count_mode="paths")])
def test_bad_params_raise_on_fit(family, bad):
    with pytest.raises(ValueError):
        PathReasoner(l_max=2, **bad).fit(family[0])


def test_fit_requires_graph():
    with pytest.raises(TypeError):
        PathReasoner().fit(np.zeros((3, 3)))


def test_father_path_statistics(fitted, family):
    kg, _ = family
    father = kg.relation_id("father")
    stats = fitted.stats_
    inv_child = (kg.inverse(kg.relation_id("child")),)
    # inverse "child" reaches both parents, so it is right about half the time
    s, t = stats.counts(father, inv_child)
    assert 0 < s < t
    assert stats.probability(father, inv_child) > 0.4
    best = max(stats.probability(father, p) for p in stats.paths(father))
    assert best == 1.0


def test_predict_and_score(fitted, family):
    kg, splits = family
    preds = fitted.predict(_query_rows(kg, splits.test))
    assert preds.shape == (len(splits.test),)
    gold = np.array([t for _, _, t in splits.test])
    assert (preds == gold).mean() > 0.5
    mrr = fitted.score(np.array(splits.test), known=splits.all())
    assert 0.5 < mrr <= 1.0
    report = fitted.evaluate(np.array(splits.test), known=splits.all())
    assert report.mrr == mrr


def test_single_row_and_unknown_relation(fitted, family):
    kg, splits = family
    h, r, _ = splits.test[0]
    assert fitted.predict([h, r]).shape == (1,)
    unseen = kg.relation_id("spouse_inv")
    assert unseen not in fitted.stats_
    assert fitted.answer(h, unseen) == []
    assert fitted.predict([[h, unseen]])[0] == -1


def test_random_walk_collection(family):
    kg, splits = family
    est = PathReasoner(l_max=2, collection="rw", walks_per_triple=20, seed=1).fit(kg)
    assert est.distance_index_ is None
    assert est.score(np.array(splits.test), known=splits.all()) > 0.3


def test_inverse_queries(family):
    kg, _ = family
    est = PathReasoner(l_max=2, k=5, inverse_queries=True).fit(kg)
    assert kg.inverse(kg.relation_id("father")) in est.stats_


def test_from_artifacts(fitted, family):
    kg, splits = family
    twin = PathReasoner.from_artifacts(kg, fitted.stats_, fitted.joints_,
                                       **fitted.get_params())
    rows = _query_rows(kg, splits.test)
    assert (twin.predict(rows) == fitted.predict(rows)).all()


class TestCheckIdArray:
    def test_accepts(self, toy):
        kg, _ = toy
        assert check_id_array([[0, 0, 1]], kg, 3).dtype == np.int64

    @pytest.mark.parametrize("X", [[[0, 0]], [[0.5, 0, 1]], [[-1, 0, 1]], [[0, 99, 1]],
                                   [[0, 0, 99]], np.zeros((2, 2, 3), dtype=int)])
    def test_rejects(self, toy, X):
        kg, _ = toy
        with pytest.raises(ValueError):
            check_id_array(X, kg, 3)
