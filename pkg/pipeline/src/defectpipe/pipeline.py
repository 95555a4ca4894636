"""Orchestration: one release pair end to end, plus report files."""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .explain import (
    DEFAULT_N_SAMPLES,
    DEFAULT_TOP_K,
    LocalExplanation,
    ExplanationSummary,
    explain_predictions,
    summarize_explanations,
)
from .model import DEFAULT_SEARCH_BUDGET, TrainedModel, train_and_evaluate
from .tables import ReleasePair, load_features_csv, make_release_pair

log = logging.getLogger(__name__)


@dataclass
class PairResult:
    model: TrainedModel
    explanations: list[LocalExplanation]
    summary: Optional[ExplanationSummary]


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def run_pair(
    train_csv: Path | str,
    test_csv: Path | str,
    out_dir: Path | str,
    seed: int = 0,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    top_k: int = DEFAULT_TOP_K,
    n_samples: int = DEFAULT_N_SAMPLES,
) -> PairResult:
    pair = make_release_pair(load_features_csv(train_csv), load_features_csv(test_csv))
    model = train_and_evaluate(pair, search_budget=search_budget, seed=seed)
    explanations = explain_predictions(
        model, pair.test, pair.train, k=top_k, seed=seed, n_samples=n_samples
    )
    summary = summarize_explanations(explanations)
    write_outputs(Path(out_dir), pair, model, explanations, summary)
    return PairResult(model=model, explanations=explanations, summary=summary)


def write_outputs(
    out_dir: Path,
    pair: ReleasePair,
    model: TrainedModel,
    explanations: list[LocalExplanation],
    summary: Optional[ExplanationSummary],
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    pair_id = _safe(pair.pair_id)

    report_path = out_dir / f"model_report_{pair_id}.json"
    report_path.write_text(
        json.dumps(model.report.to_payload(), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )

    importance_path = out_dir / f"importances_{pair_id}.csv"
    lines = ["feature,score"]
    for feature in sorted(model.report.importances):
        lines.append(f"{feature},{model.report.importances[feature]:.12g}")
    importance_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    explanation_path = out_dir / f"explanations_{pair_id}.csv"
    rows = ["path,predicted,correct,feature,score"]
    for explanation in explanations:
        ordered = sorted(
            explanation.supporting_scores.items(),
            key=lambda item: (-abs(item[1]), item[0]),
        )
        for feature, score in ordered:
            rows.append(
                f"{explanation.path},{explanation.predicted},"
                f"{int(explanation.correct)},{feature},{score:.12g}"
            )
    explanation_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    summary_path = out_dir / f"explanation_summary_{pair_id}.json"
    if summary is None:
        payload = {"n_correct_defective": 0, "top_rank_proportion": None}
    else:
        payload = {
            "n_correct_defective": summary.n_correct_defective,
            "top_rank_proportion": summary.top_rank_proportion,
            "score_medians": {
                feature: float(np.median(scores))
                for feature, scores in summary.score_distributions.items()
            },
        }
    summary_path.write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    log.info("wrote %s outputs to %s", pair_id, out_dir)
