"""Two-sample rank-sum (Mann-Whitney/Wilcoxon) significance test.

Two-sided p-values, doubled-tail convention capped at 1.0. When both samples
have at most 10 values the p-value is exact: every C(n+m, n) assignment of
the pooled observations to the first group is enumerated and the tails of
the U statistic (computed from midranks, so ties are handled) are counted.
Larger samples use the normal approximation with midrank tie correction and
a 0.5 continuity correction:

    U   = R_a - n_a(n_a+1)/2          (R_a = sum of sample-a midranks)
    mu  = n_a n_b / 2
    var = n_a n_b / 12 * ((n + 1) - sum(t^3 - t) / (n (n - 1)))
    z   = (|U - mu| - 0.5) / sqrt(var)
    p   = erfc(z / sqrt(2))

Samples whose pooled values are all identical have no rank information and
yield p = 1.0 (the degenerate-sample rule).
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Sequence

_EXACT_LIMIT = 10


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing the mean of their rank range."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _u_statistic(ranks: Sequence[float], n_a: int) -> float:
    r_a = sum(ranks[:n_a])
    return r_a - n_a * (n_a + 1) / 2


def _exact_p(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    n_a = len(sample_a)
    pooled = list(sample_a) + list(sample_b)
    ranks = _midranks(pooled)
    base = n_a * (n_a + 1) / 2
    u_obs = _u_statistic(ranks, n_a)
    at_most = 0
    at_least = 0
    total = 0
    eps = 1e-9
    for combo in combinations(range(len(pooled)), n_a):
        u = sum(ranks[i] for i in combo) - base
        total += 1
        if u <= u_obs + eps:
            at_most += 1
        if u >= u_obs - eps:
            at_least += 1
    return min(1.0, 2 * min(at_most, at_least) / total)


def _normal_p(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    n_a = len(sample_a)
    n_b = len(sample_b)
    n = n_a + n_b
    pooled = list(sample_a) + list(sample_b)
    ranks = _midranks(pooled)
    u = _u_statistic(ranks, n_a)

    # Tie correction over the pooled value multiplicities.
    counts: dict[float, int] = {}
    for v in pooled:
        counts[v] = counts.get(v, 0) + 1
    tie_term = sum(t**3 - t for t in counts.values())
    variance = n_a * n_b / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        return 1.0
    z = max(0.0, abs(u - n_a * n_b / 2) - 0.5) / math.sqrt(variance)
    return math.erfc(z / math.sqrt(2))


def rank_sum_test(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """Two-sided rank-sum p-value; exact when both samples have n <= 10."""
    if not sample_a or not sample_b:
        raise ValueError("both samples must be non-empty")
    if len(set(sample_a) | set(sample_b)) == 1:
        return 1.0
    if len(sample_a) <= _EXACT_LIMIT and len(sample_b) <= _EXACT_LIMIT:
        return _exact_p(sample_a, sample_b)
    return _normal_p(sample_a, sample_b)
