"""Ownership approximations and per-file profiles.

Two approximations are computed per developer and file:

* commit share: the developer's non-merge commits touching the file divided
  by all non-merge commits touching it inside the release window;
* line share: the developer's surviving lines divided by the file's total
  lines at the release ref.

A developer absent from one evidence source has *no value* under that
approximation rather than zero, so each approximation's values form a
probability vector over its own developer set. Expertise is a strict
threshold on the value: above it the developer is major, otherwise minor.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional

from .identity import DeveloperIdentity
from .mining import ReleaseSnapshot

DEFAULT_EXPERTISE_THRESHOLD = 0.05


class Level(str, Enum):
    MAJOR = "major"
    MINOR = "minor"


class PathNotFoundError(KeyError):
    """The path has neither window commits nor lines at the release ref."""


@dataclass(frozen=True)
class DeveloperOwnership:
    commit_count: int
    line_count: int
    own_commit: Optional[float]
    own_line: Optional[float]
    level_commit: Optional[Level]
    level_line: Optional[Level]


@dataclass(frozen=True)
class FileOwnershipProfile:
    path: str
    total_commits: int
    total_lines: int
    per_developer: Mapping[str, DeveloperOwnership]

    @property
    def commit_developers(self) -> frozenset[str]:
        return frozenset(
            k for k, d in self.per_developer.items() if d.own_commit is not None
        )

    @property
    def line_developers(self) -> frozenset[str]:
        return frozenset(
            k for k, d in self.per_developer.items() if d.own_line is not None
        )


@dataclass(frozen=True)
class OwnershipMetrics:
    """The six per-file modeling metrics.

    own_commit / own_line are the top contributor's share under each
    approximation (0 when that approximation identifies nobody); the four
    counts split each approximation's developers by expertise level.
    """

    path: str
    own_commit: float
    own_line: float
    major_commit: int
    minor_commit: int
    major_line: int
    minor_line: int


def classify_expertise(value: float, threshold: float = DEFAULT_EXPERTISE_THRESHOLD) -> Level:
    """Major strictly above the threshold, minor otherwise (boundary is minor)."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"ownership value must lie in [0, 1]; got {value}")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1); got {threshold}")
    return Level.MAJOR if value > threshold else Level.MINOR


def _commit_counts(snapshot: ReleaseSnapshot, path: str) -> tuple[Counter, int]:
    """Non-merge commit counts per developer key for one path."""
    counts: Counter = Counter()
    total = 0
    for commit in snapshot.commits:
        if commit.is_merge:
            continue
        if any(change.path == path for change in commit.file_changes):
            counts[commit.author.key] += 1
            total += 1
    return counts, total


def _dev_key(dev: DeveloperIdentity | str) -> str:
    return dev.key if isinstance(dev, DeveloperIdentity) else dev


def own_commit(
    dev: DeveloperIdentity | str, path: str, snapshot: ReleaseSnapshot
) -> Optional[float]:
    """Commit share of ``dev`` for ``path``; None when undefined or absent."""
    counts, total = _commit_counts(snapshot, path)
    if total == 0:
        return None
    made = counts.get(_dev_key(dev), 0)
    return made / total if made > 0 else None


def own_line(
    dev: DeveloperIdentity | str, path: str, snapshot: ReleaseSnapshot
) -> Optional[float]:
    """Line share of ``dev`` for ``path``; None when undefined or absent."""
    authorship = snapshot.file_authorship.get(path)
    if authorship is None or authorship.total_lines == 0:
        return None
    lines = authorship.author_line_counts.get(_dev_key(dev), 0)
    return lines / authorship.total_lines if lines > 0 else None


def _assemble_profile(
    path: str,
    commit_counts: Mapping[str, int],
    total_commits: int,
    line_counts: Mapping[str, int],
    total_lines: int,
    threshold: float,
) -> FileOwnershipProfile:
    per_developer: dict[str, DeveloperOwnership] = {}
    for key in sorted(set(commit_counts) | set(line_counts)):
        n_commits = commit_counts.get(key, 0)
        n_lines = line_counts.get(key, 0)
        share_commit = n_commits / total_commits if n_commits > 0 else None
        share_line = n_lines / total_lines if n_lines > 0 else None
        per_developer[key] = DeveloperOwnership(
            commit_count=n_commits,
            line_count=n_lines,
            own_commit=share_commit,
            own_line=share_line,
            level_commit=(
                classify_expertise(share_commit, threshold)
                if share_commit is not None
                else None
            ),
            level_line=(
                classify_expertise(share_line, threshold)
                if share_line is not None
                else None
            ),
        )
    return FileOwnershipProfile(
        path=path,
        total_commits=total_commits,
        total_lines=total_lines,
        per_developer=per_developer,
    )


def build_profile(
    path: str,
    snapshot: ReleaseSnapshot,
    threshold: float = DEFAULT_EXPERTISE_THRESHOLD,
) -> FileOwnershipProfile:
    """Ownership profile of one file under both approximations."""
    commit_counts, total_commits = _commit_counts(snapshot, path)
    authorship = snapshot.file_authorship.get(path)
    if total_commits == 0 and authorship is None:
        raise PathNotFoundError(path)
    line_counts = dict(authorship.author_line_counts) if authorship else {}
    total_lines = authorship.total_lines if authorship else 0
    return _assemble_profile(
        path, commit_counts, total_commits, line_counts, total_lines, threshold
    )


def profiles_at_release(
    snapshot: ReleaseSnapshot,
    threshold: float = DEFAULT_EXPERTISE_THRESHOLD,
) -> list[FileOwnershipProfile]:
    """Profiles for every filtered file present at the release ref, path order.

    One pass over the commit list replaces the per-path scan of
    build_profile; files touched in the window but absent at the ref are out
    of scope here (they have no release-level row).
    """
    by_path: dict[str, Counter] = {}
    totals: Counter = Counter()
    for commit in snapshot.commits:
        if commit.is_merge:
            continue
        for change in commit.file_changes:
            if change.path in snapshot.file_authorship:
                by_path.setdefault(change.path, Counter())[commit.author.key] += 1
                totals[change.path] += 1
    profiles = []
    for path in sorted(snapshot.file_authorship):
        authorship = snapshot.file_authorship[path]
        profiles.append(
            _assemble_profile(
                path,
                by_path.get(path, Counter()),
                totals.get(path, 0),
                dict(authorship.author_line_counts),
                authorship.total_lines,
                threshold,
            )
        )
    return profiles


def file_metrics(profile: FileOwnershipProfile) -> OwnershipMetrics:
    """Collapse a profile into the six modeling metrics (max aggregation)."""
    commit_values = [
        d.own_commit for d in profile.per_developer.values() if d.own_commit is not None
    ]
    line_values = [
        d.own_line for d in profile.per_developer.values() if d.own_line is not None
    ]
    levels = list(profile.per_developer.values())
    return OwnershipMetrics(
        path=profile.path,
        own_commit=max(commit_values) if commit_values else 0.0,
        own_line=max(line_values) if line_values else 0.0,
        major_commit=sum(1 for d in levels if d.level_commit is Level.MAJOR),
        minor_commit=sum(1 for d in levels if d.level_commit is Level.MINOR),
        major_line=sum(1 for d in levels if d.level_line is Level.MAJOR),
        minor_line=sum(1 for d in levels if d.level_line is Level.MINOR),
    )
