"""Importance ranking across releases, delegated to the miner's npsk command.

The miner owns the effect-size ranking implementation; this module only
pools (feature, score) rows from several model reports, shells out to the
documented CSV contract, and reads the ranks back.
"""
from __future__ import annotations

import csv
import logging
import os
import shlex
import shutil
import subprocess
from pathlib import Path
from typing import Sequence

from .errors import MissingToolError, PipelineError
from .model import ModelReport

log = logging.getLogger(__name__)

CLI_ENV_VAR = "OWNLENS_CLI"


def locate_miner_cli() -> list[str]:
    """The ownership miner command, from $OWNLENS_CLI or PATH."""
    override = os.environ.get(CLI_ENV_VAR, "").strip()
    if override:
        return shlex.split(override)
    found = shutil.which("ownlens")
    if found:
        return [found]
    raise MissingToolError(
        "the 'ownlens' CLI is not on PATH; install the miner package or set "
        f"{CLI_ENV_VAR} to the command to run"
    )


def pool_importances(reports: Sequence[ModelReport]) -> list[tuple[str, float]]:
    if len(reports) < 1:
        raise PipelineError("need at least one model report")
    rows = []
    for report in reports:
        for feature in sorted(report.importances):
            rows.append((feature, report.importances[feature]))
    if not rows:
        raise PipelineError("reports carry no importance scores")
    return rows


def rank_importances(
    reports: Sequence[ModelReport], work_dir: Path | str
) -> dict[str, int]:
    """Write the pooled scores, run the miner's npsk subcommand, read ranks."""
    work_dir = Path(work_dir)
    work_dir.mkdir(parents=True, exist_ok=True)
    pool_path = work_dir / "importance_pool.csv"
    ranks_path = work_dir / "importance_ranks.csv"

    with open(pool_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["group_id", "value"])
        for feature, score in pool_importances(reports):
            writer.writerow([feature, f"{score:.12g}"])

    command = locate_miner_cli() + [
        "npsk",
        "--input",
        str(pool_path),
        "--output",
        str(ranks_path),
    ]
    proc = subprocess.run(command, capture_output=True, text=True)
    if proc.returncode != 0:
        raise PipelineError(
            f"npsk ranking failed (exit {proc.returncode}): {proc.stderr.strip()}"
        )

    ranks: dict[str, int] = {}
    with open(ranks_path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["group_id", "rank"]:
            raise PipelineError(f"unexpected npsk output header: {header}")
        for row in reader:
            ranks[row[0]] = int(row[1])
    log.info("ranked %d features across %d reports", len(ranks), len(reports))
    return ranks
