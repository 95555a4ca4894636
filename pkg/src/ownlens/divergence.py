"""How far the two ownership approximations drift apart.

Per file: the overlap of the developer sets found by each approximation
(normalized by the union), the rank correlation of ownership values over the
developers both approaches identify, and the fraction of those common
developers whose expertise level agrees. Per release: the pooled comparison
of exclusive developers, testing whether developers only the commit-based
approach finds hold larger ownership than developers only the line-based
approach finds.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .ownership import DEFAULT_EXPERTISE_THRESHOLD, FileOwnershipProfile, Level
from .stats import (
    UndefinedCorrelationError,
    cliffs_delta,
    correlation_magnitude,
    spearman_rho,
    wilcoxon_one_sided,
)

log = logging.getLogger(__name__)


class Overlap(NamedTuple):
    n_common: int
    n_commit_only: int
    n_line_only: int
    common: float
    commit_only: float
    line_only: float


@dataclass(frozen=True)
class DivergenceRecord:
    path: str
    n_common: int
    n_commit_only: int
    n_line_only: int
    common: float
    commit_only: float
    line_only: float
    rho: Optional[float]
    expertise_consistency: Optional[float]


@dataclass(frozen=True)
class ExclusiveComparison:
    """Release-level pooled comparison of exclusive developers.

    Values pool one entry per (file, developer) pair: the commit share of
    every commit-only developer against the line share of every line-only
    developer. Major fractions use the level under the approach that
    identified the developer.
    """

    release_name: str
    commit_only_values: tuple[float, ...]
    line_only_values: tuple[float, ...]
    p_value: float
    delta: float
    magnitude: str
    major_fraction_commit_only: float
    major_fraction_line_only: float


@dataclass(frozen=True)
class ReleaseSummary:
    release_name: str
    files_analyzed: int
    files_skipped_empty_union: int
    files_without_rho: int
    median_common: Optional[float]
    median_commit_only: Optional[float]
    median_line_only: Optional[float]
    median_rho: Optional[float]
    rho_magnitude: Optional[str]
    median_expertise_consistency: Optional[float]
    exclusive: Optional[ExclusiveComparison]


def set_overlap(profile: FileOwnershipProfile) -> Overlap:
    """Union-normalized developer-set overlap between the two approaches."""
    commit_devs = profile.commit_developers
    line_devs = profile.line_developers
    union = commit_devs | line_devs
    if not union:
        raise ValueError(f"no developers identified for {profile.path}")
    n_common = len(commit_devs & line_devs)
    n_commit_only = len(commit_devs - line_devs)
    n_line_only = len(line_devs - commit_devs)
    size = len(union)
    return Overlap(
        n_common=n_common,
        n_commit_only=n_commit_only,
        n_line_only=n_line_only,
        common=n_common / size,
        commit_only=n_commit_only / size,
        line_only=n_line_only / size,
    )


def ownership_correlation(profile: FileOwnershipProfile) -> Optional[float]:
    """Spearman rho over common developers; None below two or when all-tied."""
    common = sorted(profile.commit_developers & profile.line_developers)
    if len(common) < 2:
        return None
    x = [profile.per_developer[k].own_commit for k in common]
    y = [profile.per_developer[k].own_line for k in common]
    try:
        return spearman_rho(x, y).rho
    except UndefinedCorrelationError:
        log.debug("correlation undefined for %s (all-tied ranks)", profile.path)
        return None


def expertise_consistency(profile: FileOwnershipProfile) -> Optional[float]:
    """Fraction of common developers with matching expertise levels."""
    common = profile.commit_developers & profile.line_developers
    if not common:
        return None
    consistent = sum(
        1
        for k in common
        if profile.per_developer[k].level_commit == profile.per_developer[k].level_line
    )
    return consistent / len(common)


def divergence_record(profile: FileOwnershipProfile) -> DivergenceRecord:
    overlap = set_overlap(profile)
    return DivergenceRecord(
        path=profile.path,
        n_common=overlap.n_common,
        n_commit_only=overlap.n_commit_only,
        n_line_only=overlap.n_line_only,
        common=overlap.common,
        commit_only=overlap.commit_only,
        line_only=overlap.line_only,
        rho=ownership_correlation(profile),
        expertise_consistency=expertise_consistency(profile),
    )


def exclusive_comparison(
    profiles: Sequence[FileOwnershipProfile],
    release_name: str,
    threshold: float = DEFAULT_EXPERTISE_THRESHOLD,
) -> Optional[ExclusiveComparison]:
    """Pool exclusive developers across files and compare the two pools.

    One-sided Wilcoxon rank sum under H1 "commit-only ownership is
    stochastically greater", Cliff's delta with its magnitude label, and the
    major fraction of each pool. None (with a diagnostic) when either pool
    is empty.
    """
    del threshold  # levels are already classified on the profiles
    commit_only_values: list[float] = []
    commit_only_major = 0
    line_only_values: list[float] = []
    line_only_major = 0
    for profile in sorted(profiles, key=lambda p: p.path):
        commit_devs = profile.commit_developers
        line_devs = profile.line_developers
        for key in sorted(commit_devs - line_devs):
            dev = profile.per_developer[key]
            commit_only_values.append(dev.own_commit)
            if dev.level_commit is Level.MAJOR:
                commit_only_major += 1
        for key in sorted(line_devs - commit_devs):
            dev = profile.per_developer[key]
            line_only_values.append(dev.own_line)
            if dev.level_line is Level.MAJOR:
                line_only_major += 1
    if not commit_only_values or not line_only_values:
        log.warning(
            "release %s: exclusive-developer comparison skipped "
            "(commit_only pool %d, line_only pool %d)",
            release_name,
            len(commit_only_values),
            len(line_only_values),
        )
        return None
    p_value = wilcoxon_one_sided(commit_only_values, line_only_values, "greater")
    effect = cliffs_delta(commit_only_values, line_only_values)
    return ExclusiveComparison(
        release_name=release_name,
        commit_only_values=tuple(commit_only_values),
        line_only_values=tuple(line_only_values),
        p_value=p_value,
        delta=effect.delta,
        magnitude=effect.magnitude,
        major_fraction_commit_only=commit_only_major / len(commit_only_values),
        major_fraction_line_only=line_only_major / len(line_only_values),
    )


def _median(values: list[float]) -> Optional[float]:
    if not values:
        return None
    return float(np.median(np.asarray(values, dtype=np.float64)))


def divergence_report(
    profiles: Sequence[FileOwnershipProfile],
    release_name: str,
    threshold: float = DEFAULT_EXPERTISE_THRESHOLD,
) -> tuple[list[DivergenceRecord], ReleaseSummary]:
    """Per-file divergence records plus release-level aggregates.

    Files whose developer union is empty (empty files untouched in the
    window) are skipped with a diagnostic and counted; files with fewer than
    two common developers are excluded from the correlation median and
    counted separately.
    """
    records: list[DivergenceRecord] = []
    skipped = 0
    for profile in sorted(profiles, key=lambda p: p.path):
        try:
            records.append(divergence_record(profile))
        except ValueError:
            log.info("skipping %s: no developers under either approach", profile.path)
            skipped += 1
    rhos = [r.rho for r in records if r.rho is not None]
    consistencies = [
        r.expertise_consistency
        for r in records
        if r.expertise_consistency is not None
    ]
    median_rho = _median(rhos)
    summary = ReleaseSummary(
        release_name=release_name,
        files_analyzed=len(records),
        files_skipped_empty_union=skipped,
        files_without_rho=len(records) - len(rhos),
        median_common=_median([r.common for r in records]),
        median_commit_only=_median([r.commit_only for r in records]),
        median_line_only=_median([r.line_only for r in records]),
        median_rho=median_rho,
        rho_magnitude=(
            correlation_magnitude(median_rho) if median_rho is not None else None
        ),
        median_expertise_consistency=_median(consistencies),
        exclusive=exclusive_comparison(profiles, release_name, threshold),
    )
    return records, summary
