"""Cross-release defect-model pipeline over ownership feature CSVs."""
from __future__ import annotations

__version__ = "0.1.0"

from .autospearman import autospearman_select
from .explain import LocalExplanation, ExplanationSummary, explain_predictions, summarize_explanations
from .model import ModelReport, TrainedModel, permutation_importance, train_and_evaluate
from .pipeline import PairResult, run_pair
from .ranking import rank_importances
from .ranks import auc_score
from .smote import smote_balance
from .tables import (
    FeatureTable,
    OWNERSHIP_FEATURES,
    ReleasePair,
    load_features_csv,
    make_release_pair,
)

__all__ = [
    "FeatureTable",
    "LocalExplanation",
    "ModelReport",
    "OWNERSHIP_FEATURES",
    "PairResult",
    "ReleasePair",
    "ExplanationSummary",
    "TrainedModel",
    "auc_score",
    "autospearman_select",
    "explain_predictions",
    "load_features_csv",
    "make_release_pair",
    "permutation_importance",
    "rank_importances",
    "summarize_explanations",
    "run_pair",
    "smote_balance",
    "train_and_evaluate",
]
