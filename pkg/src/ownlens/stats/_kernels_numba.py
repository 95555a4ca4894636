"""Numba @njit implementations of the statistics kernels.

Preferred backend for the hot inner loops: cross-pair dominance counting is
O(n*m) and the exact rank-sum table is a dense integer DP. Results must be
bit-identical to the pure-numpy twin.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def average_ranks(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    ranks = np.empty(n, dtype=np.float64)
    if n == 0:
        return ranks
    order = np.argsort(values)
    i = 0
    while i < n:
        j = i
        v = values[order[i]]
        while j + 1 < n and values[order[j + 1]] == v:
            j += 1
        mean_rank = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


@njit(cache=True)
def dominance_counts(x: np.ndarray, y: np.ndarray) -> tuple[int, int]:
    greater = 0
    less = 0
    for i in range(x.shape[0]):
        xi = x[i]
        for j in range(y.shape[0]):
            yj = y[j]
            if xi > yj:
                greater += 1
            elif xi < yj:
                less += 1
    return greater, less


@njit(cache=True)
def ranksum_tail_counts(n_total: int, n_x: int, w: int) -> tuple[int, int, int]:
    smax = n_x * (2 * n_total - n_x + 1) // 2
    dp = np.zeros((n_x + 1, smax + 1), dtype=np.int64)
    dp[0, 0] = 1
    for i in range(1, n_total + 1):
        kmax = min(i, n_x)
        for k in range(kmax, 0, -1):
            for s in range(smax, i - 1, -1):
                dp[k, s] += dp[k - 1, s - i]
    total = 0
    greater_eq = 0
    less_eq = 0
    for s in range(smax + 1):
        c = dp[n_x, s]
        total += c
        if s >= w:
            greater_eq += c
        if s <= w:
            less_eq += c
    return greater_eq, less_eq, total
