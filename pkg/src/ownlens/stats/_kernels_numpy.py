"""Pure-numpy implementations of the statistics kernels.

Fallback backend; must return bit-identical results to the numba twin.
"""
from __future__ import annotations

import numpy as np


def average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties replaced by the mean rank of their run."""
    n = values.shape[0]
    ranks = np.empty(n, dtype=np.float64)
    if n == 0:
        return ranks
    order = np.argsort(values, kind="mergesort")
    ordered = values[order]
    new_run = np.empty(n, dtype=bool)
    new_run[0] = True
    new_run[1:] = ordered[1:] != ordered[:-1]
    run_id = np.cumsum(new_run) - 1
    starts = np.flatnonzero(new_run)
    ends = np.append(starts[1:], n)
    run_mean = (starts + ends - 1) / 2.0 + 1.0
    ranks[order] = run_mean[run_id]
    return ranks


def dominance_counts(x: np.ndarray, y: np.ndarray) -> tuple[int, int]:
    """Over all cross pairs, count x_i > y_j and x_i < y_j."""
    ys = np.sort(y)
    greater = int(np.searchsorted(ys, x, side="left").sum())
    less = int((ys.size - np.searchsorted(ys, x, side="right")).sum())
    return greater, less


def ranksum_tail_counts(n_total: int, n_x: int, w: int) -> tuple[int, int, int]:
    """Exact null distribution tails of the rank-sum statistic.

    Counts size-n_x subsets of ranks {1..n_total} whose sum is >= w and
    <= w, plus the total number of subsets. Valid for tie-free samples.
    """
    smax = n_x * (2 * n_total - n_x + 1) // 2
    dp = np.zeros((n_x + 1, smax + 1), dtype=np.int64)
    dp[0, 0] = 1
    for i in range(1, n_total + 1):
        for k in range(min(i, n_x), 0, -1):
            dp[k, i:] += dp[k - 1, : smax + 1 - i]
    row = dp[n_x]
    total = int(row.sum())
    lo = min(max(w, 0), smax + 1)
    greater_eq = int(row[lo:].sum()) if w <= smax else 0
    less_eq = int(row[: min(w, smax) + 1].sum()) if w >= 0 else 0
    return greater_eq, less_eq, total
