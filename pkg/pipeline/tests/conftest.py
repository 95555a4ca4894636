"""Synthetic single-signal corpora in the miner's features CSV format."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from defectpipe.tables import FeatureTable

N_NOISE = 10


def synth_table(
    seed: int,
    n_files: int = 500,
    release_name: str | None = None,
    shuffle_labels: bool = False,
) -> FeatureTable:
    """Defective iff OWN_COMMIT < 0.5, plus independent noise columns."""
    rng = np.random.default_rng(seed)
    own_commit = rng.random(n_files)
    noise = rng.normal(size=(n_files, N_NOISE))
    labels = (own_commit < 0.5).astype(np.int64)
    if shuffle_labels:
        labels = rng.permutation(labels)
    return FeatureTable(
        release_name=release_name or f"rel{seed}",
        paths=[f"src/File{i:04d}.java" for i in range(n_files)],
        feature_names=["OWN_COMMIT"] + [f"noise{i:02d}" for i in range(N_NOISE)],
        features=np.column_stack([own_commit, noise]),
        labels=labels,
    )


def write_features_csv(table: FeatureTable, path: Path) -> Path:
    """Serialize a table in the miner's export format (ratios at 6 places)."""
    lines = [",".join(["release_name", "path"] + table.feature_names + ["defective"])]
    for i in range(table.n_rows):
        cells = [table.release_name, table.paths[i]]
        cells += [f"{v:.6f}" for v in table.features[i]]
        cells.append(str(int(table.labels[i])))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def synth_pair_files(tmp_path):
    train = write_features_csv(synth_table(1, release_name="1.0"), tmp_path / "train.csv")
    test = write_features_csv(synth_table(2, release_name="2.0"), tmp_path / "test.csv")
    return train, test
