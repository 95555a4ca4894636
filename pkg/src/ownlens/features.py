"""Per-file modeling rows: ownership metrics, native confounders, labels.

One row per file present at the release ref. Native confounders are the
process/size subset computable from the snapshot itself (commit count, added
and deleted lines, developer count, file length); anything else arrives as
pass-through columns from an external CSV keyed by path.
"""
from __future__ import annotations

import logging
from typing import Mapping, Optional, Sequence

from .mining import ReleaseSnapshot
from .ownership import (
    DEFAULT_EXPERTISE_THRESHOLD,
    file_metrics,
    profiles_at_release,
)
from .storage import format_count, format_ratio

log = logging.getLogger(__name__)

BASE_COLUMNS = [
    "release_name",
    "path",
    "OWN_COMMIT",
    "OWN_LINE",
    "MAJOR_COMMIT",
    "MINOR_COMMIT",
    "MAJOR_LINE",
    "MINOR_LINE",
    "COMMITS",
    "ADDED_LINES",
    "DEL_LINES",
    "NDEV",
    "LOC",
]


def change_totals(snapshot: ReleaseSnapshot) -> dict[str, tuple[int, int]]:
    """Added/deleted line sums per path over non-merge window commits."""
    totals: dict[str, tuple[int, int]] = {}
    for commit in snapshot.commits:
        if commit.is_merge:
            continue
        for change in commit.file_changes:
            added, deleted = totals.get(change.path, (0, 0))
            totals[change.path] = (added + change.lines_added, deleted + change.lines_deleted)
    return totals


def feature_rows(
    snapshot: ReleaseSnapshot,
    threshold: float = DEFAULT_EXPERTISE_THRESHOLD,
    labels: Optional[Mapping[str, int]] = None,
    extra_columns: Optional[Sequence[str]] = None,
    extra_values: Optional[Mapping[str, Sequence[str]]] = None,
) -> tuple[list[str], list[list[str]]]:
    """Assemble the features table as preformatted strings.

    Column order is fixed: the base columns, then pass-through confounder
    columns in their source order, then the defective label (only when a
    labels map is supplied). Label paths that match no file at the release
    ref produce a warning; files without a label get an empty cell.
    """
    header = list(BASE_COLUMNS)
    extras = list(extra_columns or [])
    header.extend(extras)
    if labels is not None:
        header.append("defective")
        for labeled_path in labels:
            if labeled_path not in snapshot.file_authorship:
                log.warning(
                    "label path %r not present at release %s; label unused",
                    labeled_path,
                    snapshot.window.name,
                )
    profiles = profiles_at_release(snapshot, threshold)
    changed = change_totals(snapshot)
    rows: list[list[str]] = []
    for profile in profiles:
        metrics = file_metrics(profile)
        added, deleted = changed.get(profile.path, (0, 0))
        ndev = len(profile.commit_developers | profile.line_developers)
        row = [
            snapshot.window.name,
            profile.path,
            format_ratio(metrics.own_commit),
            format_ratio(metrics.own_line),
            format_count(metrics.major_commit),
            format_count(metrics.minor_commit),
            format_count(metrics.major_line),
            format_count(metrics.minor_line),
            format_count(profile.total_commits),
            format_count(added),
            format_count(deleted),
            format_count(ndev),
            format_count(profile.total_lines),
        ]
        if extras:
            supplied = (extra_values or {}).get(profile.path)
            if supplied is None:
                row.extend("" for _ in extras)
            else:
                row.extend(supplied)
        if labels is not None:
            flag = labels.get(profile.path)
            row.append("" if flag is None else format_count(flag))
        rows.append(row)
    return header, rows
