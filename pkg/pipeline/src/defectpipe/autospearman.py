"""Automated collinearity pruning in two passes.

Pass 1 removes pairwise rank-correlated features: while any pair reaches the
correlation cut, take the strongest pair and drop its member with the higher
mean absolute correlation to everything else. Pass 2 removes features whose
variance inflation factor (from a least-squares regression on the remaining
features) reaches the VIF cut, one at a time, highest first.

All ties break lexicographically on the feature name, which makes the
selection independent of input column order. The survivors are returned
sorted by name for the same reason.
"""
from __future__ import annotations

import logging

import numpy as np

from .errors import PipelineError
from .ranks import average_ranks
from .tables import FeatureTable

log = logging.getLogger(__name__)

DEFAULT_RHO_CUT = 0.7
DEFAULT_VIF_CUT = 5.0


def _spearman_matrix(columns: np.ndarray) -> np.ndarray:
    ranked = np.column_stack([average_ranks(columns[:, j]) for j in range(columns.shape[1])])
    return np.corrcoef(ranked, rowvar=False)


def _vif(columns: np.ndarray, j: int) -> float:
    target = columns[:, j]
    others = np.delete(columns, j, axis=1)
    design = np.column_stack([np.ones(len(target)), others])
    beta, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = target - design @ beta
    ss_res = float(residual @ residual)
    centered = target - target.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        return float("inf")
    r_squared = 1.0 - ss_res / ss_tot
    if r_squared >= 1.0:
        return float("inf")
    return 1.0 / (1.0 - r_squared)


def autospearman_select(
    table: FeatureTable,
    rho_cut: float = DEFAULT_RHO_CUT,
    vif_cut: float = DEFAULT_VIF_CUT,
) -> list[str]:
    """Surviving feature names, sorted lexicographically."""
    names = sorted(table.feature_names)
    matrix = table.columns(names)
    if len(names) < 2:
        raise PipelineError("need at least two feature columns")

    keep = []
    for idx, name in enumerate(names):
        if np.all(matrix[:, idx] == matrix[0, idx]):
            log.warning("dropping constant column %s", name)
        else:
            keep.append(name)
    names = keep
    matrix = table.columns(names)

    # pass 1: pairwise rank correlation
    while len(names) > 1:
        rho = np.abs(_spearman_matrix(matrix))
        np.fill_diagonal(rho, 0.0)
        strongest = None
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                if rho[a, b] >= rho_cut:
                    candidate = (rho[a, b], names[a], names[b], a, b)
                    if strongest is None or candidate[0] > strongest[0]:
                        strongest = candidate
        if strongest is None:
            break
        _, name_a, name_b, a, b = strongest
        mean_a = rho[a].sum() / (len(names) - 1)
        mean_b = rho[b].sum() / (len(names) - 1)
        if mean_a > mean_b:
            drop = a
        elif mean_b > mean_a:
            drop = b
        else:
            drop = b if name_b > name_a else a
        log.info("correlation pass drops %s (|rho|=%.3f with %s)",
                 names[drop], strongest[0], name_a if drop == b else name_b)
        del names[drop]
        matrix = np.delete(matrix, drop, axis=1)

    # pass 2: variance inflation
    while len(names) > 1:
        vifs = np.array([_vif(matrix, j) for j in range(len(names))])
        worst = float(np.max(vifs))
        if worst < vif_cut:
            break
        candidates = [j for j in range(len(names)) if vifs[j] == worst]
        drop = max(candidates, key=lambda j: names[j])
        log.info("vif pass drops %s (VIF=%.2f)", names[drop], worst)
        del names[drop]
        matrix = np.delete(matrix, drop, axis=1)

    return sorted(names)
