import os
from collections import Counter

import numpy as np
import pytest

from pathreason.kg import KnowledgeGraph

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


# Worked example graph: h1 reaches t1 through e4 (r2, r5) and through e1, e2
# (r2, r3, r4); e3 hangs off e1 and cannot reach t1.
TOY_TRAIN = [
    ("h1", "r2", "e1"),
    ("h1", "r2", "e4"),
    ("e1", "r3", "e2"),
    ("e1", "r3", "e3"),
    ("e2", "r4", "t1"),
    ("e4", "r5", "t1"),
]
TOY_QUERY = ("h1", "r1", "t1")


@pytest.fixture
def toy():
    kg, splits = KnowledgeGraph.from_triples(TOY_TRAIN, test=[TOY_QUERY])
    return kg, splits


def random_graph(seed, n_entities=None, n_edges=None, n_relations=4):
    """Random multi-relational graph with at most 50 entities and 150 edges."""
    rng = np.random.default_rng(seed)
    n = int(n_entities or rng.integers(5, 51))
    m = int(n_edges or rng.integers(n, min(150, 3 * n) + 1))
    rows = []
    for _ in range(m):
        h, t = rng.integers(0, n, size=2)
        r = rng.integers(0, n_relations)
        rows.append((f"e{h}", f"r{r}", f"e{t}"))
    kg, splits = KnowledgeGraph.from_triples(rows)
    return kg, rows


def raw_adjacency(kg):
    """Edge list rebuilt from the training triples, independent of kg adjacency."""
    adj = {u: [] for u in range(kg.n_entities)}
    nb = kg.n_base_relations
    for h, r, t in kg.train:
        adj[h].append((r, t))
        adj[t].append((r + nb, h))
    return adj


def enumerate_simple_paths(adj, h, t, l_max, excluded=()):
    """All simple h->t walks of length <= l_max as a Counter of relation tuples."""
    out = Counter()

    def rec(u, rels, seen):
        if u == t:
            out[tuple(rels)] += 1
            return
        if len(rels) == l_max:
            return
        for rel, v in adj[u]:
            if v in seen or (u, rel, v) in excluded:
                continue
            rec(v, rels + [rel], seen | {v})

    rec(h, [], {h})
    return out


def enumerate_walks(adj, h, path, excluded=()):
    """Endpoint counts of all walks from h whose labels match ``path``."""
    out = Counter()

    def rec(u, i):
        if i == len(path):
            out[u] += 1
            return
        for rel, v in adj[u]:
            if rel == path[i] and (u, rel, v) not in excluded:
                rec(v, i + 1)

    rec(h, 0)
    return dict(out)


def dataset_dir(name):
    """Benchmark directory from $PATHREASON_DATA or ./data, or None."""
    roots = [os.environ.get("PATHREASON_DATA", ""), os.path.join(os.path.dirname(__file__), "..", "data")]
    for root in roots:
        if root:
            path = os.path.join(root, name)
            if os.path.isfile(os.path.join(path, "train.txt")):
                return os.path.abspath(path)
    return None
