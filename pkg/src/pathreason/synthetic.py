"""Synthetic family knowledge graphs for demos and smoke tests."""

from __future__ import annotations

import os
import random


def make_family_triples(n_families=200, observe=0.6, seed=0):
    """Sparse family facts (``father``, ``mother``, ``child``, ``sibling``, ``spouse``).

    Every true fact is kept with probability ``observe``; the result is a list
    of ``(head, relation, tail)`` name triples in generation order.
    """
    rng = random.Random(seed)
    facts = []
    for f in range(n_families):
        dad, mom = f"f{f}_dad", f"f{f}_mom"
        kids = [f"f{f}_kid{i}" for i in range(rng.randint(1, 4))]
        facts.append((dad, "spouse", mom))
        facts.append((mom, "spouse", dad))
        for kid in kids:
            facts += [(kid, "father", dad), (kid, "mother", mom),
                      (dad, "child", kid), (mom, "child", kid)]
            facts += [(kid, "sibling", other) for other in kids if other != kid]
    return [fact for fact in facts if rng.random() < observe]


def make_family_splits(n_families=200, observe=0.6, test_fraction=0.1, seed=0):
    """``(train, valid, test)`` name-triple lists; valid/test hold ``father`` facts only."""
    rng = random.Random(seed + 1)
    facts = make_family_triples(n_families, observe, seed)
    train, valid, test = [], [], []
    for fact in facts:
        if fact[1] == "father" and rng.random() < 2 * test_fraction:
            (test if rng.random() < 0.5 else valid).append(fact)
        else:
            train.append(fact)
    return train, valid, test


def write_dataset(directory, train, valid, test, types=None):
    os.makedirs(directory, exist_ok=True)
    for name, rows in (("train", train), ("valid", valid), ("test", test)):
        with open(os.path.join(directory, f"{name}.txt"), "w", encoding="utf-8") as fh:
            fh.writelines(f"{h}\t{r}\t{t}\n" for h, r, t in rows)
    if types:
        with open(os.path.join(directory, "entity2type.txt"), "w", encoding="utf-8") as fh:
            fh.writelines(f"{e}\t{c}\n" for e, c in types.items())
