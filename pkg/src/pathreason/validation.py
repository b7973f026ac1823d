"""Input checks shared by the estimator and the CLI."""

import numpy as np

from .kg import KnowledgeGraph


def check_graph(X):
    if not isinstance(X, KnowledgeGraph):
        raise TypeError(f"expected a KnowledgeGraph, got {type(X).__name__}")
    return X


def check_id_array(X, kg, n_columns, name="X"):
    """Validate an ``(n, n_columns)`` integer array of (head, relation[, tail]) ids."""
    arr = np.asarray(X)
    if arr.ndim == 1 and arr.size == n_columns:
        arr = arr.reshape(1, n_columns)
    if arr.ndim != 2 or arr.shape[1] != n_columns:
        raise ValueError(f"{name} must have shape (n, {n_columns}), got {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"{name} must hold integer ids, got dtype {arr.dtype}")
    arr = arr.astype(np.int64, copy=False)
    entity_cols = [0, 2] if n_columns == 3 else [0]
    for col in entity_cols:
        bad = (arr[:, col] < 0) | (arr[:, col] >= kg.n_entities)
        if bad.any():
            raise ValueError(f"{name} has entity ids out of range at rows {np.flatnonzero(bad)[:5]}")
    bad = (arr[:, 1] < 0) | (arr[:, 1] >= kg.n_relations)
    if bad.any():
        raise ValueError(f"{name} has relation ids out of range at rows {np.flatnonzero(bad)[:5]}")
    return arr
