"""Integer-indexed knowledge graph with inverse-relation augmentation."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

logger = logging.getLogger(__name__)

INVERSE_SUFFIX = "_inv"
DEFAULT_TYPE = "__default__"
SPLITS = ("train", "valid", "test")


class DatasetError(Exception):
    """Raised when a dataset directory cannot be loaded."""


class Triple(NamedTuple):
    head: int
    relation: int
    tail: int


@dataclass
class DatasetSplits:
    train: list[Triple] = field(default_factory=list)
    valid: list[Triple] = field(default_factory=list)
    test: list[Triple] = field(default_factory=list)

    def all(self) -> list[Triple]:
        return self.train + self.valid + self.test


class KnowledgeGraph:
    """Immutable adjacency over training triples plus their inverses.

    Base relations occupy ids ``0..n_base-1``; relation ``r`` has its inverse at
    ``r + n_base``. Only the training split contributes edges.
    """

    def __init__(self, entities, base_relations, train, entity_types=None,
                 type_names=None):
        self.entities: list[str] = list(entities)
        self.entity_index = {name: i for i, name in enumerate(self.entities)}
        if len(self.entity_index) != len(self.entities):
            raise DatasetError("duplicate entity names")

        base_relations = list(base_relations)
        for name in base_relations:
            if name.endswith(INVERSE_SUFFIX):
                raise DatasetError(
                    f"relation name {name!r} collides with the reserved inverse "
                    f"suffix {INVERSE_SUFFIX!r}")
        self.n_base_relations = len(base_relations)
        self.relations: list[str] = base_relations + [
            name + INVERSE_SUFFIX for name in base_relations]
        self.relation_index = {name: i for i, name in enumerate(self.relations)}
        if len(self.relation_index) != len(self.relations):
            raise DatasetError("duplicate relation names")

        self.type_names: list[str] = list(type_names or [DEFAULT_TYPE])
        if entity_types is None:
            entity_types = [0] * len(self.entities)
        self.entity_types: list[int] = list(entity_types)
        if len(self.entity_types) != len(self.entities):
            raise DatasetError("entity type map must cover every entity")

        n = len(self.entities)
        self._out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self._by_rel: list[dict[int, list[int]]] = [{} for _ in range(n)]
        self.train: list[Triple] = []
        self._edges: set[tuple[int, int, int]] = set()
        for h, r, t in train:
            if not (0 <= r < self.n_base_relations):
                raise DatasetError(f"training triple uses non-base relation id {r}")
            triple = Triple(h, r, t)
            if triple in self._edges:
                continue
            self.train.append(triple)
            self._add_edge(h, r, t)
            self._add_edge(t, self.inverse(r), h)

    def _add_edge(self, u, rel, v):
        self._edges.add((u, rel, v))
        self._out[u].append((rel, v))
        self._by_rel[u].setdefault(rel, []).append(v)

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_relations(self) -> int:
        return len(self.relations)

    @property
    def n_types(self) -> int:
        return len(self.type_names)

    @property
    def n_edges(self) -> int:
        return sum(len(adj) for adj in self._out)

    def inverse(self, r: int) -> int:
        nb = self.n_base_relations
        return r + nb if r < nb else r - nb

    def is_inverse(self, r: int) -> bool:
        return r >= self.n_base_relations

    def neighbors(self, u: int) -> list[tuple[int, int]]:
        """Outgoing ``(relation, entity)`` pairs of ``u`` in insertion order."""
        return self._out[u]

    def successors(self, u: int, rel: int) -> list[int]:
        return self._by_rel[u].get(rel, ())

    def has_edge(self, u: int, rel: int, v: int) -> bool:
        return (u, rel, v) in self._edges

    def entity_type(self, e: int) -> int:
        return self.entity_types[e]

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for u, adj in enumerate(self._out):
            for rel, v in adj:
                yield u, rel, v

    def relation_id(self, name: str) -> int:
        return self.relation_index[name]

    def entity_id(self, name: str) -> int:
        return self.entity_index[name]

    def __repr__(self):
        return (f"KnowledgeGraph(entities={self.n_entities}, "
                f"relations={self.n_base_relations}x2, train={len(self.train)})")

    @classmethod
    def from_triples(cls, train, valid=(), test=(), entity_types=None):
        """Build a graph (and id-level splits) from string triples.

        ``entity_types`` optionally maps entity name to type name.
        """
        entities: dict[str, int] = {}
        relations: dict[str, int] = {}
        splits = DatasetSplits()
        for split_name, rows in zip(SPLITS, (train, valid, test)):
            seen = set()
            out = getattr(splits, split_name)
            for h, r, t in rows:
                ids = Triple(entities.setdefault(h, len(entities)),
                             relations.setdefault(r, len(relations)),
                             entities.setdefault(t, len(entities)))
                if ids in seen:
                    continue
                seen.add(ids)
                out.append(ids)
        type_ids, type_names = _resolve_types(list(entities), entity_types)
        kg = cls(list(entities), list(relations), splits.train,
                 entity_types=type_ids, type_names=type_names)
        return kg, splits


def _resolve_types(entity_names, type_map):
    type_names = [DEFAULT_TYPE]
    index = {DEFAULT_TYPE: 0}
    if not type_map:
        return [0] * len(entity_names), type_names
    ids = []
    for name in entity_names:
        type_name = type_map.get(name)
        if type_name is None:
            ids.append(0)
            continue
        if type_name not in index:
            index[type_name] = len(type_names)
            type_names.append(type_name)
        ids.append(index[type_name])
    return ids, type_names


def _read_triples(path, stats):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3 or not all(p.strip() for p in parts):
                stats["malformed"] += 1
                logger.warning("%s:%d: malformed triple line rejected", path, lineno)
                continue
            rows.append(tuple(p.strip() for p in parts))
    return rows


def read_type_map(path) -> dict[str, str]:
    types = {}
    stats = {"malformed": 0}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                stats["malformed"] += 1
                logger.warning("%s:%d: malformed type line rejected", path, lineno)
                continue
            types.setdefault(parts[0].strip(), parts[1].strip())
    return types


def load_dataset(directory, type_map_path=None):
    """Load ``train.txt``/``valid.txt``/``test.txt`` from ``directory``.

    Vocabularies come from the union of all splits in file order. When
    ``type_map_path`` is None, ``entity2type.txt`` inside the directory is used
    if present; otherwise every entity gets the default type.

    Returns ``(kg, splits)``; ``kg.load_stats`` records rejected and duplicate
    line counts.
    """
    stats = {"malformed": 0}
    rows = {}
    for name in SPLITS:
        path = os.path.join(directory, f"{name}.txt")
        if not os.path.isfile(path):
            raise DatasetError(f"missing split file: {path}")
        rows[name] = _read_triples(path, stats)

    if type_map_path is None:
        candidate = os.path.join(directory, "entity2type.txt")
        type_map_path = candidate if os.path.isfile(candidate) else None
    type_map = read_type_map(type_map_path) if type_map_path else None

    kg, splits = KnowledgeGraph.from_triples(
        rows["train"], rows["valid"], rows["test"], entity_types=type_map)
    stats["duplicates"] = sum(len(rows[n]) for n in SPLITS) - len(splits.all())
    kg.load_stats = stats
    if stats["malformed"]:
        logger.warning("%d malformed lines rejected in %s", stats["malformed"], directory)
    logger.info("loaded %r from %s", kg, directory)
    return kg, splits


def save_vocabularies(kg: KnowledgeGraph, directory) -> None:
    """Write ``entities.tsv`` and ``relations.tsv`` as ``id<TAB>name`` lines."""
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "entities.tsv"), "w", encoding="utf-8") as fh:
        for i, name in enumerate(kg.entities):
            fh.write(f"{i}\t{name}\n")
    with open(os.path.join(directory, "relations.tsv"), "w", encoding="utf-8") as fh:
        for i, name in enumerate(kg.relations):
            fh.write(f"{i}\t{name}\n")


def read_vocabulary(path) -> list[str]:
    names = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            idx, name = line.rstrip("\n").split("\t", 1)
            if int(idx) != i:
                raise DatasetError(f"{path}: non-contiguous id {idx} at line {i + 1}")
            names.append(name)
    return names
