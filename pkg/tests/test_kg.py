import os

import pytest

from pathreason.kg import (
    DEFAULT_TYPE,
    DatasetError,
    KnowledgeGraph,
    load_dataset,
    read_vocabulary,
    save_vocabularies,
)


def write_split(tmp_path, train, valid="", test="", types=None):
    (tmp_path / "train.txt").write_text(train, encoding="utf-8")
    (tmp_path / "valid.txt").write_text(valid, encoding="utf-8")
    (tmp_path / "test.txt").write_text(test, encoding="utf-8")
    if types is not None:
        (tmp_path / "entity2type.txt").write_text(types, encoding="utf-8")
    return str(tmp_path)


def test_two_line_file_adjacency(tmp_path):
    kg, splits = load_dataset(write_split(tmp_path, "A\tr\tB\nB\ts\tC\n"))
    assert kg.n_entities == 3
    assert kg.n_base_relations == 2 and kg.n_relations == 4
    A, B, C = (kg.entity_id(x) for x in "ABC")
    r, s = kg.relation_id("r"), kg.relation_id("s")
    expected = {
        A: [(r, B)],
        B: [(kg.inverse(r), A), (s, C)],
        C: [(kg.inverse(s), B)],
    }
    assert {u: kg.neighbors(u) for u in (A, B, C)} == expected
    assert kg.relations[kg.inverse(r)] == "r_inv"
    assert len(splits.train) == 2


def test_empty_train_file(tmp_path):
    kg, splits = load_dataset(write_split(tmp_path, "", test="A\tr\tB\n"))
    assert kg.n_edges == 0
    assert splits.train == [] and len(splits.test) == 1


def test_missing_split_is_fatal(tmp_path):
    (tmp_path / "train.txt").write_text("A\tr\tB\n")
    with pytest.raises(DatasetError, match="valid.txt"):
        load_dataset(str(tmp_path))


def test_malformed_lines_counted(tmp_path, caplog):
    kg, splits = load_dataset(write_split(tmp_path, "A\tr\tB\nbroken line\nA\tr\n\nB\ts\tC\n"))
    assert kg.load_stats["malformed"] == 2
    assert len(splits.train) == 2


def test_duplicates_first_wins(tmp_path):
    kg, splits = load_dataset(write_split(tmp_path, "A\tr\tB\nA\tr\tB\nB\tr\tA\n"))
    assert len(splits.train) == 2
    assert kg.n_edges == 2 * len(kg.train) == 4
    assert kg.load_stats["duplicates"] == 1


def test_inverse_suffix_collision(tmp_path):
    with pytest.raises(DatasetError, match="_inv"):
        load_dataset(write_split(tmp_path, "A\tr_inv\tB\n"))


def test_inverse_involution_and_edge_symmetry(tmp_path):
    kg, _ = load_dataset(write_split(tmp_path, "A\tr\tB\nB\ts\tC\nC\tr\tA\nA\tr\tA\n"))
    for r in range(kg.n_relations):
        assert kg.inverse(kg.inverse(r)) == r
        assert kg.inverse(r) != r
    for u, rel, v in kg.edges():
        assert kg.has_edge(v, kg.inverse(rel), u)


def test_valid_test_not_in_adjacency(tmp_path):
    kg, splits = load_dataset(write_split(tmp_path, "A\tr\tB\n", valid="B\tr\tC\n", test="C\tr\tD\n"))
    assert kg.n_entities == 4
    B, C = kg.entity_id("B"), kg.entity_id("C")
    assert not kg.has_edge(B, kg.relation_id("r"), C)
    assert kg.n_edges == 2


def test_entity_types(tmp_path):
    kg, _ = load_dataset(write_split(tmp_path, "A\tr\tB\nB\ts\tC\n", types="A\tperson\n"))
    assert kg.type_names[kg.entity_type(kg.entity_id("A"))] == "person"
    assert kg.type_names[kg.entity_type(kg.entity_id("C"))] == DEFAULT_TYPE


def test_no_type_map_single_type(tmp_path):
    kg, _ = load_dataset(write_split(tmp_path, "A\tr\tB\nB\ts\tC\n"))
    assert {kg.entity_type(e) for e in range(kg.n_entities)} == {0}
    assert kg.n_types == 1


def test_isolated_and_inverse_only_neighbors():
    kg, _ = KnowledgeGraph.from_triples([("A", "r", "B")], test=[("C", "r", "A")])
    assert kg.neighbors(kg.entity_id("C")) == []
    only = kg.neighbors(kg.entity_id("B"))
    assert len(only) == 1 and kg.is_inverse(only[0][0])


def test_vocabulary_round_trip(tmp_path):
    data = write_split(tmp_path, "A\tr\tB\nB\ts\tC\n", test="D\tt\tA\n")
    kg, _ = load_dataset(data)
    out = tmp_path / "artifacts"
    save_vocabularies(kg, str(out))
    assert read_vocabulary(os.path.join(out, "entities.tsv")) == kg.entities
    assert read_vocabulary(os.path.join(out, "relations.tsv")) == kg.relations
    again, _ = load_dataset(data)
    assert again.entities == kg.entities and again.relations == kg.relations
