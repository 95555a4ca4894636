"""Code ownership mining and divergence analysis for git repositories."""
from __future__ import annotations

__version__ = "0.1.0"

from .divergence import (
    DivergenceRecord,
    ExclusiveComparison,
    ReleaseSummary,
    divergence_report,
    exclusive_comparison,
    expertise_consistency,
    ownership_correlation,
    set_overlap,
)
from .identity import DeveloperIdentity, load_alias_map, resolve_identity
from .mining import (
    CommitRecord,
    FileChange,
    LineAuthorship,
    ReleaseSnapshot,
    ReleaseWindow,
    blame_release_files,
    build_snapshot,
    enumerate_release_commits,
)
from .ownership import (
    DEFAULT_EXPERTISE_THRESHOLD,
    DeveloperOwnership,
    FileOwnershipProfile,
    Level,
    OwnershipMetrics,
    build_profile,
    classify_expertise,
    file_metrics,
    own_commit,
    own_line,
    profiles_at_release,
)

__all__ = [
    "CommitRecord",
    "DEFAULT_EXPERTISE_THRESHOLD",
    "DeveloperIdentity",
    "DeveloperOwnership",
    "DivergenceRecord",
    "ExclusiveComparison",
    "FileChange",
    "FileOwnershipProfile",
    "Level",
    "LineAuthorship",
    "OwnershipMetrics",
    "ReleaseSnapshot",
    "ReleaseSummary",
    "ReleaseWindow",
    "blame_release_files",
    "build_profile",
    "build_snapshot",
    "classify_expertise",
    "divergence_report",
    "enumerate_release_commits",
    "exclusive_comparison",
    "expertise_consistency",
    "file_metrics",
    "load_alias_map",
    "own_commit",
    "own_line",
    "ownership_correlation",
    "profiles_at_release",
    "resolve_identity",
    "set_overlap",
]
