"""Command-line front door.

Subcommands: mine (snapshots), analyze (ownership + divergence + release
summary), features (modeling rows), npsk (effect-size ranking of grouped
scores), version. Exit codes: 0 success, 2 usage or configuration error,
3 version-control failure.
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .config import RunConfig, build_run_config
from .divergence import divergence_report
from .errors import UsageError, VcsError
from .features import feature_rows
from .identity import load_alias_map
from .mining import ReleaseSnapshot, ReleaseWindow, build_snapshot
from .ownership import profiles_at_release
from .stats import npsk_rank
from .storage import (
    atomic_write_text,
    format_count,
    format_ratio,
    read_confounders,
    read_group_values,
    read_labels,
    write_csv,
    write_json,
)

log = logging.getLogger("ownlens")

OWNERSHIP_HEADER = [
    "path",
    "developer_key",
    "commit_count",
    "line_count",
    "own_commit",
    "own_line",
    "level_commit",
    "level_line",
]
DIVERGENCE_HEADER = [
    "path",
    "n_common",
    "n_commit_only",
    "n_line_only",
    "common",
    "commit_only",
    "line_only",
    "rho",
    "expertise_consistency",
]


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def snapshot_path(out_dir: Path, window: ReleaseWindow) -> Path:
    return out_dir / f"snapshot_{_safe_name(window.name)}.json"


def _load_snapshot(out_dir: Path, window: ReleaseWindow) -> ReleaseSnapshot:
    path = snapshot_path(out_dir, window)
    if not path.exists():
        raise UsageError(f"snapshot {path} not found; run 'mine' first")
    return ReleaseSnapshot.from_json(path.read_text(encoding="utf-8"))


def cmd_mine(config: RunConfig) -> None:
    aliases = load_alias_map(config.alias_map_path) if config.alias_map_path else None
    for window in config.windows:
        snapshot = build_snapshot(
            config.repo_path, window, config.extensions, aliases
        )
        target = snapshot_path(config.output_dir, window)
        atomic_write_text(target, snapshot.to_json())
        log.info(
            "window %s: %d commits, %d files at ref -> %s",
            window.name,
            len(snapshot.commits),
            len(snapshot.file_authorship),
            target,
        )


def _summary_payload(summary) -> dict:
    exclusive = None
    if summary.exclusive is not None:
        exclusive = {
            "n_commit_only": len(summary.exclusive.commit_only_values),
            "n_line_only": len(summary.exclusive.line_only_values),
            "p_value": summary.exclusive.p_value,
            "delta": summary.exclusive.delta,
            "magnitude": summary.exclusive.magnitude,
            "major_fraction_commit_only": summary.exclusive.major_fraction_commit_only,
            "major_fraction_line_only": summary.exclusive.major_fraction_line_only,
        }
    return {
        "release_name": summary.release_name,
        "files_analyzed": summary.files_analyzed,
        "files_skipped_empty_union": summary.files_skipped_empty_union,
        "files_without_rho": summary.files_without_rho,
        "median_common": summary.median_common,
        "median_commit_only": summary.median_commit_only,
        "median_line_only": summary.median_line_only,
        "median_rho": summary.median_rho,
        "rho_magnitude": summary.rho_magnitude,
        "median_expertise_consistency": summary.median_expertise_consistency,
        "exclusive": exclusive,
    }


def cmd_analyze(config: RunConfig) -> None:
    for window in config.windows:
        snapshot = _load_snapshot(config.output_dir, window)
        profiles = profiles_at_release(snapshot, config.expertise_threshold)
        name = _safe_name(window.name)

        ownership_rows = []
        for profile in profiles:
            for key in sorted(profile.per_developer):
                dev = profile.per_developer[key]
                ownership_rows.append(
                    [
                        profile.path,
                        key,
                        format_count(dev.commit_count),
                        format_count(dev.line_count),
                        format_ratio(dev.own_commit),
                        format_ratio(dev.own_line),
                        dev.level_commit.value if dev.level_commit else "",
                        dev.level_line.value if dev.level_line else "",
                    ]
                )
        write_csv(config.output_dir / f"ownership_{name}.csv", OWNERSHIP_HEADER, ownership_rows)

        records, summary = divergence_report(
            profiles, window.name, config.expertise_threshold
        )
        divergence_rows = [
            [
                r.path,
                format_count(r.n_common),
                format_count(r.n_commit_only),
                format_count(r.n_line_only),
                format_ratio(r.common),
                format_ratio(r.commit_only),
                format_ratio(r.line_only),
                format_ratio(r.rho),
                format_ratio(r.expertise_consistency),
            ]
            for r in records
        ]
        write_csv(
            config.output_dir / f"divergence_{name}.csv", DIVERGENCE_HEADER, divergence_rows
        )
        write_json(config.output_dir / f"summary_{name}.json", _summary_payload(summary))
        log.info("window %s: analyzed %d files", window.name, summary.files_analyzed)


def cmd_features(config: RunConfig) -> None:
    labels = read_labels(config.labels_path) if config.labels_path else None
    extra_columns = None
    extra_values = None
    if config.confounders_path:
        extra_columns, extra_values = read_confounders(config.confounders_path)
    for window in config.windows:
        snapshot = _load_snapshot(config.output_dir, window)
        header, rows = feature_rows(
            snapshot,
            config.expertise_threshold,
            labels=labels,
            extra_columns=extra_columns,
            extra_values=extra_values,
        )
        name = _safe_name(window.name)
        write_csv(config.output_dir / f"features_{name}.csv", header, rows)
        log.info("window %s: wrote %d feature rows", window.name, len(rows))


def cmd_npsk(input_path: str, output_path: str) -> None:
    groups = read_group_values(input_path)
    assignment = npsk_rank(groups)
    rows = [
        [str(gid), format_count(rank)]
        for gid, rank in zip(assignment.group_ids, assignment.ranks)
    ]
    write_csv(output_path, ["group_id", "rank"], rows)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--repo", help="path to the repository to mine")
    parser.add_argument("--out-dir", dest="out_dir", help="output directory")
    parser.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="expertise threshold (default 0.05)",
    )
    parser.add_argument(
        "--extensions",
        help="comma-separated file extensions to keep (default .java)",
    )
    parser.add_argument(
        "--window",
        action="append",
        metavar="NAME=PRED..REF",
        help="release window; repeatable; empty PRED takes full history",
    )
    parser.add_argument("--aliases", help="alias map CSV (raw_key,canonical_key)")
    parser.add_argument("--labels", help="defect labels CSV (path,defective)")
    parser.add_argument("--confounders", help="external confounder CSV keyed by path")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ownlens",
        description="Commit-based vs line-based code ownership mining and analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("mine", "extract release snapshots from a repository"),
        ("analyze", "compute ownership, divergence, and release summaries"),
        ("features", "export per-file modeling rows"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_options(p)

    p_npsk = sub.add_parser("npsk", help="rank grouped scores (group_id,value CSV)")
    p_npsk.add_argument("--input", required=True, help="input CSV with group_id,value")
    p_npsk.add_argument("--output", required=True, help="output CSV with group_id,rank")
    p_npsk.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("version", help="print the version")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "version":
            print(__version__)
        elif args.command == "npsk":
            cmd_npsk(args.input, args.output)
        else:
            config = build_run_config(args)
            if args.command == "mine":
                cmd_mine(config)
            elif args.command == "analyze":
                cmd_analyze(config)
            elif args.command == "features":
                cmd_features(config)
    except UsageError as exc:
        print(f"ownlens: error: {exc}", file=sys.stderr)
        return 2
    except VcsError as exc:
        print(f"ownlens: vcs error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
