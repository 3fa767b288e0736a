"""Query-privacy verification: exact enumeration plus a sampling cross-check.

A server's whole view of a round is one query vector, so index privacy holds
iff the query distribution does not depend on the requested index. The exact
check enumerates all 2^M masks in rational arithmetic and compares the
resulting distributions across indices; the empirical total-variation
estimator exists to sanity-check the sampling path against the enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .protocol import first_query_vector, second_query_vector

MAX_ENUMERATION_MESSAGES = 20


@dataclass
class QueryDistribution:
    """Exact distribution over query vectors: mapping query tuple -> Fraction."""

    weights: dict

    def __post_init__(self):
        if any(p < 0 for p in self.weights.values()):
            raise ValueError("weights: probabilities must be non-negative")
        if sum(self.weights.values()) != 1:
            raise ValueError("weights: probabilities must sum to exactly 1")

    @property
    def support(self):
        return tuple(sorted(self.weights))

    def probability(self, query):
        return self.weights.get(tuple(query), Fraction(0))


def leaky_second_query_vector(mask, index, coeff=1):
    """Deliberately broken second-group rule: always adds the index indicator,
    so the entry at the requested index can take the value +1. Exists to show
    the privacy checks can fail."""
    mask = np.asarray(mask, dtype=int)
    raw = -mask.copy()
    raw[index - 1] += 1
    if coeff == 1:
        return raw
    return np.array([Fraction(int(v), int(coeff)) for v in raw], dtype=object)


def _mask_bits(value, num_messages):
    return np.array([(value >> k) & 1 for k in range(num_messages)], dtype=int)


def exact_query_distribution(group, num_messages, index, coeffs=None, second_rule=None):
    """Distribution of the query a server in the given group sees when the
    user wants the given index, by enumerating every mask."""
    if group not in (1, 2):
        raise ValueError("group: must be 1 or 2")
    if not 1 <= index <= num_messages:
        raise ValueError(f"index: must be in [1, {num_messages}]")
    if num_messages > MAX_ENUMERATION_MESSAGES:
        raise ValueError(
            f"num_messages: enumeration capped at {MAX_ENUMERATION_MESSAGES}")
    a1, a2 = coeffs if coeffs is not None else (1, 1)
    rule = second_rule if second_rule is not None else second_query_vector
    prob = Fraction(1, 2 ** num_messages)
    weights = {}
    for u in range(2 ** num_messages):
        mask = _mask_bits(u, num_messages)
        vec = first_query_vector(mask, a1) if group == 1 else rule(mask, index, a2)
        key = tuple(vec.tolist())
        weights[key] = weights.get(key, Fraction(0)) + prob
    return QueryDistribution(weights)


def verify_privacy_exact(num_messages, coeffs=None, second_rule=None):
    """True iff, for both groups, the exact query distribution is identical
    for every requested index. No tolerance: rational equality."""
    for group in (1, 2):
        reference = exact_query_distribution(group, num_messages, 1, coeffs, second_rule)
        for index in range(2, num_messages + 1):
            other = exact_query_distribution(group, num_messages, index, coeffs, second_rule)
            if other.weights != reference.weights:
                return False
    return True


def empirical_tv_distance(group, num_messages, index_a, index_b, samples, rng,
                          coeffs=None, second_rule=None):
    """Total-variation distance between the empirical query distributions under
    two requested indices."""
    if samples < 1:
        raise ValueError("samples: must be >= 1")
    a1, a2 = coeffs if coeffs is not None else (1, 1)
    rule = second_rule if second_rule is not None else second_query_vector
    counts = ({}, {})
    for slot, index in enumerate((index_a, index_b)):
        if not 1 <= index <= num_messages:
            raise ValueError(f"index: must be in [1, {num_messages}]")
        masks = rng.integers(0, 2, (samples, num_messages))
        for mask in masks:
            vec = first_query_vector(mask, a1) if group == 1 else rule(mask, index, a2)
            key = tuple(vec.tolist())
            counts[slot][key] = counts[slot].get(key, 0) + 1
    keys = set(counts[0]) | set(counts[1])
    return 0.5 * sum(abs(counts[0].get(k, 0) - counts[1].get(k, 0)) for k in keys) / samples
