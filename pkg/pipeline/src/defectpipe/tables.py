"""Feature tables read from the ownership miner's CSV export.

The miner writes one row per file with a fixed header: release_name, path,
numeric metric columns, optional pass-through confounders, and an optional
defective column. Everything except release_name, path, and defective is
treated as a numeric feature.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import PipelineError

log = logging.getLogger(__name__)

NON_FEATURE_COLUMNS = ("release_name", "path", "defective")
OWNERSHIP_FEATURES = (
    "OWN_COMMIT",
    "OWN_LINE",
    "MAJOR_COMMIT",
    "MINOR_COMMIT",
    "MAJOR_LINE",
    "MINOR_LINE",
)


@dataclass
class FeatureTable:
    release_name: str
    paths: list[str]
    feature_names: list[str]
    features: np.ndarray  # shape (n_rows, n_features)
    labels: Optional[np.ndarray]  # 0/1 per row, or None when unlabeled

    @property
    def n_rows(self) -> int:
        return len(self.paths)

    def columns(self, names: list[str]) -> np.ndarray:
        index = [self.feature_names.index(n) for n in names]
        return self.features[:, index]

    def select(self, names: list[str]) -> "FeatureTable":
        return FeatureTable(
            release_name=self.release_name,
            paths=list(self.paths),
            feature_names=list(names),
            features=self.columns(names).copy(),
            labels=None if self.labels is None else self.labels.copy(),
        )


def load_features_csv(path: Path | str) -> FeatureTable:
    """Load a miner features CSV; unlabeled rows are dropped with a count."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise PipelineError(f"{path}: empty CSV")
        rows = [row for row in reader if row]
    if "path" not in header:
        raise PipelineError(f"{path}: missing 'path' column")
    has_labels = "defective" in header
    feature_names = [c for c in header if c not in NON_FEATURE_COLUMNS]
    if not feature_names:
        raise PipelineError(f"{path}: no numeric feature columns")
    col = {name: header.index(name) for name in header}

    release = ""
    paths: list[str] = []
    matrix: list[list[float]] = []
    labels: list[int] = []
    dropped = 0
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise PipelineError(
                f"{path}: line {lineno} has {len(row)} cells, expected {len(header)}"
            )
        if has_labels:
            flag = row[col["defective"]].strip()
            if flag == "":
                dropped += 1
                continue
            if flag not in ("0", "1"):
                raise PipelineError(f"{path}: line {lineno}: bad defective value {flag!r}")
            labels.append(int(flag))
        if "release_name" in col and not release:
            release = row[col["release_name"]]
        paths.append(row[col["path"]])
        try:
            matrix.append([float(row[col[name]]) for name in feature_names])
        except ValueError as exc:
            raise PipelineError(f"{path}: line {lineno}: {exc}") from exc
    if dropped:
        log.warning("%s: dropped %d unlabeled rows", path, dropped)
    if not paths:
        raise PipelineError(f"{path}: no usable rows")
    return FeatureTable(
        release_name=release,
        paths=paths,
        feature_names=feature_names,
        features=np.asarray(matrix, dtype=np.float64),
        labels=np.asarray(labels, dtype=np.int64) if has_labels else None,
    )


@dataclass
class ReleasePair:
    """Train on release i-1, evaluate on release i."""

    train: FeatureTable
    test: FeatureTable

    @property
    def pair_id(self) -> str:
        return f"{self.train.release_name or 'train'}_to_{self.test.release_name or 'test'}"


def make_release_pair(train: FeatureTable, test: FeatureTable) -> ReleasePair:
    if set(train.feature_names) != set(test.feature_names):
        raise PipelineError(
            "train and test tables must share one column set; "
            f"difference: {sorted(set(train.feature_names) ^ set(test.feature_names))}"
        )
    if train.labels is None or test.labels is None:
        raise PipelineError("both releases need a defective column")
    if len(np.unique(train.labels)) < 2:
        raise PipelineError("training release must contain both classes")
    aligned_test = test.select(list(train.feature_names))
    aligned_test.labels = test.labels
    return ReleasePair(train=train, test=aligned_test)
