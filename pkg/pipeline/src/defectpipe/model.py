"""Cross-release random-forest modeling.

Training follows a fixed recipe: prune collinear features, oversample the
minority class, draw hyperparameters from a frozen space under a randomized
budget scored by cross-validated AUC on the balanced training release, refit
the winner, then evaluate on the untouched test release with the rank-
statistic AUC and permutation importance (>= 10 shuffles per feature,
averaged, floored at zero).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.model_selection import StratifiedKFold

from .autospearman import DEFAULT_RHO_CUT, DEFAULT_VIF_CUT, autospearman_select
from .errors import PipelineError
from .ranks import auc_score
from .smote import DEFAULT_K_NEIGHBORS, smote_balance
from .tables import ReleasePair

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 50
PERMUTATION_REPEATS = 10
CV_FOLDS = 3

SEARCH_SPACE = {
    "n_estimators": (50, 100, 200, 300, 500),
    "max_depth": (None, 3, 5, 7, 10, 15),
    "criterion": ("gini", "entropy"),
    "min_samples_split": (2, 5, 10),
    "max_features": ("sqrt", "log2", None),
}


@dataclass
class ModelReport:
    pair_id: str
    seed: int
    search_budget: int
    selected_features: list[str]
    hyperparameters: dict
    auc: Optional[float]
    importances: dict[str, float] = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "seed": self.seed,
            "search_budget": self.search_budget,
            "selected_features": self.selected_features,
            "hyperparameters": {
                k: v for k, v in self.hyperparameters.items()
            },
            "auc": self.auc,
            "importances": self.importances,
        }


@dataclass
class TrainedModel:
    classifier: RandomForestClassifier
    feature_names: list[str]
    report: ModelReport

    def defective_probability(self, features: np.ndarray) -> np.ndarray:
        column = int(np.flatnonzero(self.classifier.classes_ == 1)[0])
        return self.classifier.predict_proba(features)[:, column]


def _draw_params(rng: np.random.Generator) -> dict:
    return {
        name: choices[int(rng.integers(0, len(choices)))]
        for name, choices in SEARCH_SPACE.items()
    }


def _forest(params: dict, seed: int) -> RandomForestClassifier:
    return RandomForestClassifier(random_state=seed, n_jobs=1, **params)


def _cv_auc(features: np.ndarray, labels: np.ndarray, params: dict, seed: int) -> float:
    folds = StratifiedKFold(n_splits=CV_FOLDS, shuffle=True, random_state=seed)
    scores = []
    for train_index, valid_index in folds.split(features, labels):
        model = _forest(params, seed)
        model.fit(features[train_index], labels[train_index])
        column = int(np.flatnonzero(model.classes_ == 1)[0])
        probs = model.predict_proba(features[valid_index])[:, column]
        fold_auc = auc_score(probs, labels[valid_index])
        if fold_auc is not None:
            scores.append(fold_auc)
    return float(np.mean(scores)) if scores else 0.5


def permutation_importance(
    model: TrainedModel,
    features: np.ndarray,
    labels: np.ndarray,
    seed: int,
    n_repeats: int = PERMUTATION_REPEATS,
) -> dict[str, float]:
    """Mean AUC drop over shuffles of each column, floored at zero."""
    base = auc_score(model.defective_probability(features), labels)
    if base is None:
        return {}
    rng = np.random.default_rng(seed)
    importances: dict[str, float] = {}
    for j, name in enumerate(model.feature_names):
        drops = []
        for _ in range(n_repeats):
            shuffled = features.copy()
            shuffled[:, j] = rng.permutation(shuffled[:, j])
            permuted_auc = auc_score(model.defective_probability(shuffled), labels)
            drops.append(base - (permuted_auc if permuted_auc is not None else 0.5))
        importances[name] = max(0.0, float(np.mean(drops)))
    return importances


def train_and_evaluate(
    pair: ReleasePair,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
    rho_cut: float = DEFAULT_RHO_CUT,
    vif_cut: float = DEFAULT_VIF_CUT,
    smote_k: int = DEFAULT_K_NEIGHBORS,
) -> TrainedModel:
    if search_budget < 1:
        raise PipelineError("search budget must be at least 1")
    selected = autospearman_select(pair.train, rho_cut, vif_cut)
    log.info("%s: %d of %d features survive pruning",
             pair.pair_id, len(selected), len(pair.train.feature_names))

    train_selected = pair.train.select(selected)
    train_selected.labels = pair.train.labels
    balanced = smote_balance(train_selected, seed=seed, k_neighbors=smote_k)

    rng = np.random.default_rng(seed)
    best_params = None
    best_cv = -np.inf
    for draw in range(search_budget):
        params = _draw_params(rng)
        cv = _cv_auc(balanced.features, balanced.labels, params, seed)
        log.debug("%s draw %d: cv auc %.4f %s", pair.pair_id, draw, cv, params)
        if cv > best_cv:
            best_cv = cv
            best_params = params

    classifier = _forest(best_params, seed)
    classifier.fit(balanced.features, balanced.labels)

    test_features = pair.test.columns(selected)
    column = int(np.flatnonzero(classifier.classes_ == 1)[0])
    test_probs = classifier.predict_proba(test_features)[:, column]
    test_auc = auc_score(test_probs, pair.test.labels)
    if test_auc is None:
        log.warning("%s: test release has a single class; AUC reported absent",
                    pair.pair_id)

    report = ModelReport(
        pair_id=pair.pair_id,
        seed=seed,
        search_budget=search_budget,
        selected_features=selected,
        hyperparameters={k: (v if v is not None else "none") for k, v in best_params.items()},
        auc=test_auc,
    )
    model = TrainedModel(classifier=classifier, feature_names=selected, report=report)
    report.importances = permutation_importance(
        model, test_features, pair.test.labels, seed=seed
    )
    return model
