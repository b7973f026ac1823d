"""Scalar scoring functions: hop decay, diminishing repeats, odds update, noisy-or."""

from __future__ import annotations

import math

EPS = 1e-9


def clamp(p: float, eps: float = EPS) -> float:
    return min(max(p, eps), 1.0 - eps)


def hop_adjusted(p: float, length: int, alpha: float) -> float:
    """``p * alpha ** (length - 1)``."""
    if length < 1:
        raise ValueError(f"path length must be >= 1, got {length}")
    return p * alpha ** (length - 1)


def intra_probability(p_hop: float, occurrences: int, beta: float, eps: float = EPS) -> float:
    """Noisy-or over repeated hits of one path, each worth ``beta`` times the previous."""
    if occurrences < 1:
        raise ValueError(f"occurrences must be >= 1, got {occurrences}")
    if occurrences == 1:
        # 1 - (1 - p) can drift by an ulp; keep the identity exact
        return clamp(p_hop, eps)
    miss = 1.0
    weight = p_hop
    for _ in range(occurrences):
        miss *= 1.0 - weight
        weight *= beta
        if weight < 1e-300:
            break
    return clamp(1.0 - miss, eps)


def combine_likelihood_ratio(joint: list[float], p_i: float, p_js: list[float]) -> float:
    """Observed joint correctness over the union probability expected under independence.

    ``joint[n]`` pairs with ``p_js[n]``; both use raw (not hop-adjusted)
    probabilities. No evidence, or a zero denominator, gives 1.
    """
    if not p_js:
        return 1.0
    numerator = math.fsum(joint)
    denominator = math.fsum(p_i + p_j - p_i * p_j for p_j in p_js)
    if denominator <= 0.0:
        return 1.0
    return numerator / denominator


def inter_probability(p_intra: float, lr: float, eps: float = EPS) -> float:
    """Bayesian odds update of ``p_intra`` by likelihood ratio ``lr``."""
    if lr < 0:
        raise ValueError(f"likelihood ratio must be >= 0, got {lr}")
    p_intra = clamp(p_intra, eps)
    if lr == 1.0:
        return p_intra
    posterior = p_intra / (1.0 - p_intra) * lr
    if math.isinf(posterior):
        return 1.0 - eps
    return clamp(posterior / (1.0 + posterior), eps)


def noisy_or_update(acc: float, p: float) -> float:
    """One incremental step: ``acc + p - acc * p``."""
    return acc + p - acc * p


def noisy_or(probabilities) -> float:
    """``1 - prod(1 - p)``."""
    miss = 1.0
    for p in probabilities:
        miss *= 1.0 - p
    return 1.0 - miss
