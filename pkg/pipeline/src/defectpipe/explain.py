"""Local explanations of individual predictions.

For each test row a surrogate neighborhood is sampled: every feature either
keeps the row's value or is replaced by a draw from the training column.
The model scores the neighborhood, and a proximity-weighted ridge regression
on the keep/replace mask yields one signed weight per feature: positive
means keeping that feature's value pushes the prediction toward the
defective class. The top-k weights by magnitude form the explanation.

Aggregation restricts to correctly predicted defective files and reports,
per ownership metric, the fraction of those files where that metric holds
the single highest supporting score.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import TrainedModel
from .tables import OWNERSHIP_FEATURES, FeatureTable

log = logging.getLogger(__name__)

DEFAULT_TOP_K = 5
DEFAULT_N_SAMPLES = 500
KEEP_PROBABILITY = 0.5
KERNEL_WIDTH = 0.75
RIDGE_ALPHA = 1.0


@dataclass(frozen=True)
class LocalExplanation:
    path: str
    predicted: str  # "defective" | "clean"
    correct: bool
    supporting_scores: dict[str, float]

    def top_feature(self) -> str:
        """Feature with the largest supporting score (ties: first name)."""
        best = max(self.supporting_scores.values())
        return min(k for k, v in self.supporting_scores.items() if v == best)


@dataclass
class ExplanationSummary:
    n_correct_defective: int
    score_distributions: dict[str, list[float]]
    top_rank_proportion: dict[str, float]


def _weighted_ridge(mask: np.ndarray, probs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    n_features = mask.shape[1]
    design = np.column_stack([np.ones(mask.shape[0]), mask.astype(np.float64)])
    wd = design * weights[:, None]
    gram = design.T @ wd
    penalty = np.eye(n_features + 1) * RIDGE_ALPHA
    penalty[0, 0] = 0.0  # leave the intercept unregularized
    rhs = design.T @ (weights * probs)
    coefficients = np.linalg.solve(gram + penalty, rhs)
    return coefficients[1:]


def explain_predictions(
    model: TrainedModel,
    test: FeatureTable,
    train: FeatureTable,
    k: int = DEFAULT_TOP_K,
    seed: int = 0,
    n_samples: int = DEFAULT_N_SAMPLES,
) -> list[LocalExplanation]:
    """One explanation per test row, deterministic under the seed."""
    names = model.feature_names
    test_matrix = test.columns(names)
    train_matrix = train.columns(names)
    n_train = train_matrix.shape[0]
    d = len(names)
    k = min(k, d)

    predictions = model.classifier.predict(test_matrix)
    rng = np.random.default_rng(seed)

    explanations: list[LocalExplanation] = []
    for row_index in range(test_matrix.shape[0]):
        row = test_matrix[row_index]
        keep = rng.random((n_samples, d)) < KEEP_PROBABILITY
        keep[0, :] = True  # anchor the neighborhood at the row itself
        draw_index = rng.integers(0, n_train, size=(n_samples, d))
        replacements = train_matrix[draw_index, np.arange(d)[None, :]]
        neighborhood = np.where(keep, row[None, :], replacements)

        probs = model.defective_probability(neighborhood)
        replaced_fraction = 1.0 - keep.mean(axis=1)
        weights = np.exp(-((replaced_fraction / KERNEL_WIDTH) ** 2))
        coefficients = _weighted_ridge(keep, probs, weights)

        order = np.argsort(-np.abs(coefficients), kind="mergesort")[:k]
        scores = {names[j]: float(coefficients[j]) for j in sorted(order)}

        predicted_defective = int(predictions[row_index]) == 1
        actual = None if test.labels is None else int(test.labels[row_index])
        explanations.append(
            LocalExplanation(
                path=test.paths[row_index],
                predicted="defective" if predicted_defective else "clean",
                correct=(actual is not None and int(predicted_defective) == actual),
                supporting_scores=scores,
            )
        )
    return explanations


def summarize_explanations(
    explanations: Sequence[LocalExplanation],
    ownership_features: Sequence[str] = OWNERSHIP_FEATURES,
) -> Optional[ExplanationSummary]:
    """Score distributions and top-score proportions over the correctly
    predicted defective files; None (with a diagnostic) when there are none."""
    selected = [
        e for e in explanations if e.correct and e.predicted == "defective"
    ]
    if not selected:
        log.warning("no correctly predicted defective files; nothing to aggregate")
        return None
    distributions: dict[str, list[float]] = {}
    for explanation in selected:
        for feature, score in explanation.supporting_scores.items():
            distributions.setdefault(feature, []).append(score)
    tops = [e.top_feature() for e in selected]
    proportions = {
        feature: sum(1 for t in tops if t == feature) / len(selected)
        for feature in ownership_features
    }
    return ExplanationSummary(
        n_correct_defective=len(selected),
        score_distributions=dict(sorted(distributions.items())),
        top_rank_proportion=proportions,
    )
