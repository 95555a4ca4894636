"""Self-contained non-parametric statistics.

Spearman rank correlation, the one-sided Wilcoxon rank sum test, Cliff's
delta, and a non-parametric ScottKnott-style effect-size ranking. Each is
small enough to validate against brute-force oracles, which the test suite
does; none of them depend on anything beyond numpy plus the kernel backends.

Magnitude labels use the conventional thresholds: correlations are weak
below 0.3, moderate below 0.7, strong otherwise; effect sizes are negligible
below 0.147, small below 0.33, medium below 0.474, large otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .kernels import backend_name

__all__ = [
    "CorrelationResult",
    "EffectSizeResult",
    "RankAssignment",
    "UndefinedCorrelationError",
    "backend_name",
    "cliffs_delta",
    "correlation_magnitude",
    "effect_size_magnitude",
    "npsk_rank",
    "spearman_rho",
    "wilcoxon_one_sided",
]

CORRELATION_WEAK_BELOW = 0.3
CORRELATION_STRONG_FROM = 0.7
EFFECT_SIZE_THRESHOLDS = (0.147, 0.33, 0.474)
EXACT_WILCOXON_LIMIT = 20


class UndefinedCorrelationError(ValueError):
    """Correlation is undefined (a vector has all-tied ranks)."""


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    n: int
    magnitude: str


@dataclass(frozen=True)
class EffectSizeResult:
    delta: float
    magnitude: str


@dataclass(frozen=True)
class RankAssignment:
    """Contiguous ranks from 1 (best); equal groups share a rank."""

    group_ids: tuple
    ranks: tuple[int, ...]

    def as_dict(self) -> dict:
        return dict(zip(self.group_ids, self.ranks))


def correlation_magnitude(rho: float) -> str:
    strength = abs(rho)
    if strength < CORRELATION_WEAK_BELOW:
        return "weak"
    if strength < CORRELATION_STRONG_FROM:
        return "moderate"
    return "strong"


def effect_size_magnitude(delta: float) -> str:
    strength = abs(delta)
    if strength < EFFECT_SIZE_THRESHOLDS[0]:
        return "negligible"
    if strength < EFFECT_SIZE_THRESHOLDS[1]:
        return "small"
    if strength < EFFECT_SIZE_THRESHOLDS[2]:
        return "medium"
    return "large"


def _as_array(values: Sequence[float], label: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{label} must be one-dimensional")
    return arr


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Spearman correlation: Pearson correlation of average-tie ranks."""
    xa = _as_array(x, "x")
    ya = _as_array(y, "y")
    if xa.size != ya.size:
        raise ValueError("x and y must have equal length")
    if xa.size < 2:
        raise ValueError("need at least two paired observations")
    rx = kernels.average_ranks(xa)
    ry = kernels.average_ranks(ya)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = math.sqrt(float((rx * rx).sum()) * float((ry * ry).sum()))
    if denom == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined: a vector has all-tied ranks"
        )
    rho = float((rx * ry).sum()) / denom
    rho = max(-1.0, min(1.0, rho))
    return CorrelationResult(rho=rho, n=int(xa.size), magnitude=correlation_magnitude(rho))


def wilcoxon_one_sided(
    x: Sequence[float], y: Sequence[float], alternative: str = "greater"
) -> float:
    """One-sided Wilcoxon rank sum p-value.

    Exact by enumeration of the rank-sum null distribution when the combined
    sample has at most 20 tie-free observations; otherwise the normal
    approximation with tie and continuity corrections. Degenerate all-equal
    samples give p = 0.5 under either alternative.
    """
    if alternative not in ("greater", "less"):
        raise ValueError("alternative must be 'greater' or 'less'")
    xa = _as_array(x, "x")
    ya = _as_array(y, "y")
    if xa.size == 0 or ya.size == 0:
        raise ValueError("both samples must be non-empty")
    n_x = int(xa.size)
    n_y = int(ya.size)
    n = n_x + n_y
    combined = np.concatenate([xa, ya])
    ranks = kernels.average_ranks(combined)
    w = float(ranks[:n_x].sum())
    values, counts = np.unique(combined, return_counts=True)
    has_ties = values.size < n

    if n <= EXACT_WILCOXON_LIMIT and not has_ties:
        greater_eq, less_eq, total = kernels.ranksum_tail_counts(n, n_x, int(round(w)))
        return greater_eq / total if alternative == "greater" else less_eq / total

    mean = n_x * (n + 1) / 2.0
    tie_term = float(((counts.astype(np.float64) ** 3) - counts).sum()) / (n * (n - 1))
    variance = n_x * n_y / 12.0 * ((n + 1) - tie_term)
    if variance <= 0.0:
        return 0.5
    sd = math.sqrt(variance)
    if alternative == "greater":
        z = (w - mean - 0.5) / sd
        return 0.5 * math.erfc(z / math.sqrt(2.0))
    z = (w - mean + 0.5) / sd
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def cliffs_delta(x: Sequence[float], y: Sequence[float]) -> EffectSizeResult:
    """Cliff's delta: normalized dominance over all cross pairs."""
    xa = _as_array(x, "x")
    ya = _as_array(y, "y")
    if xa.size == 0 or ya.size == 0:
        raise ValueError("both samples must be non-empty")
    greater, less = kernels.dominance_counts(xa, ya)
    delta = (greater - less) / (xa.size * ya.size)
    return EffectSizeResult(delta=float(delta), magnitude=effect_size_magnitude(delta))


def _between_partition_variance(medians: np.ndarray, split: int) -> float:
    overall = medians.mean()
    left = medians[: split + 1]
    right = medians[split + 1 :]
    return float(
        left.size * (left.mean() - overall) ** 2
        + right.size * (right.mean() - overall) ** 2
    )


def _partition(
    ordered: list, medians: Mapping, values: Mapping
) -> list[list]:
    if len(ordered) == 1:
        return [ordered]
    meds = np.array([medians[g] for g in ordered], dtype=np.float64)
    best_split = 0
    best_score = -math.inf
    for split in range(len(ordered) - 1):
        score = _between_partition_variance(meds, split)
        if score > best_score:
            best_score = score
            best_split = split
    boundary_left = ordered[best_split]
    boundary_right = ordered[best_split + 1]
    effect = cliffs_delta(values[boundary_left], values[boundary_right])
    if effect.magnitude == "negligible":
        return [ordered]
    return _partition(ordered[: best_split + 1], medians, values) + _partition(
        ordered[best_split + 1 :], medians, values
    )


def npsk_rank(groups: Mapping[object, Sequence[float]]) -> RankAssignment:
    """Non-parametric ScottKnott-style effect-size ranking.

    Groups are ordered by descending median, then recursively split at the
    boundary maximizing the between-partition variance of medians; a split
    stands only when the two boundary groups differ non-negligibly by
    Cliff's delta. Groups left in one segment share a rank; ranks are
    contiguous from 1 (highest medians).

    Ordering ties are broken by distribution content before group id, so the
    assignment is invariant under relabeling.
    """
    if not groups:
        raise ValueError("need at least one group")
    values: dict[object, np.ndarray] = {}
    medians: dict[object, float] = {}
    for gid, vals in groups.items():
        arr = _as_array(vals, f"group {gid!r}")
        if arr.size == 0:
            raise ValueError(f"group {gid!r} is empty")
        values[gid] = arr
        medians[gid] = float(np.median(arr))

    def sort_key(gid):
        arr = values[gid]
        return (
            -medians[gid],
            -float(arr.mean()),
            tuple(-v for v in np.sort(arr)[::-1]),
            str(gid),
        )

    ordered = sorted(groups.keys(), key=sort_key)
    segments = _partition(ordered, medians, values)
    assigned: list[tuple[object, int]] = []
    for rank, segment in enumerate(segments, start=1):
        for gid in segment:
            assigned.append((gid, rank))
    assigned.sort(key=lambda item: (item[1], str(item[0])))
    return RankAssignment(
        group_ids=tuple(gid for gid, _ in assigned),
        ranks=tuple(rank for _, rank in assigned),
    )
