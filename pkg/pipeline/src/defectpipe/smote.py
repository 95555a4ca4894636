"""Minority oversampling by convex combination of nearest neighbors.

Each synthetic row interpolates one minority row toward one of its k nearest
minority neighbors (Euclidean distance, k shrinking to minority-1 when the
class is small), so every synthetic value stays inside the componentwise
range of its two parents. Original rows are kept verbatim and class counts
come out exactly equal. Fully deterministic under a fixed seed.
"""
from __future__ import annotations

import numpy as np

from .errors import PipelineError
from .tables import FeatureTable

DEFAULT_K_NEIGHBORS = 5


def smote_balance(
    table: FeatureTable, seed: int, k_neighbors: int = DEFAULT_K_NEIGHBORS
) -> FeatureTable:
    if table.labels is None:
        raise PipelineError("oversampling needs a labeled table")
    labels = table.labels
    counts = {int(c): int((labels == c).sum()) for c in (0, 1)}
    if counts[0] == 0 or counts[1] == 0:
        raise PipelineError("both classes must be present before oversampling")
    if counts[0] == counts[1]:
        return table
    minority_class = 0 if counts[0] < counts[1] else 1
    n_minority = counts[minority_class]
    n_needed = counts[1 - minority_class] - n_minority
    if n_minority < 2:
        raise PipelineError(
            "minority class has a single row; supply more labeled data "
            "(a release with at least two defective files)"
        )
    k = min(k_neighbors, n_minority - 1)

    minority_rows = table.features[labels == minority_class]
    # pairwise distances among minority rows; stable ordering for determinism
    deltas = minority_rows[:, None, :] - minority_rows[None, :, :]
    distances = np.sqrt((deltas**2).sum(axis=2))
    np.fill_diagonal(distances, np.inf)
    neighbor_index = np.argsort(distances, axis=1, kind="mergesort")[:, :k]

    rng = np.random.default_rng(seed)
    synthetic = np.empty((n_needed, table.features.shape[1]), dtype=np.float64)
    for row in range(n_needed):
        i = int(rng.integers(0, n_minority))
        j = int(neighbor_index[i, int(rng.integers(0, k))])
        gap = rng.random()
        synthetic[row] = minority_rows[i] + gap * (minority_rows[j] - minority_rows[i])

    return FeatureTable(
        release_name=table.release_name,
        paths=list(table.paths) + [f"synthetic_{i}" for i in range(n_needed)],
        feature_names=list(table.feature_names),
        features=np.vstack([table.features, synthetic]),
        labels=np.concatenate(
            [labels, np.full(n_needed, minority_class, dtype=np.int64)]
        ),
    )
