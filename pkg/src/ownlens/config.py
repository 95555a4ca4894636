"""Run configuration: declarative TOML file plus command-line overrides."""
from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import UsageError
from .mining import DEFAULT_EXTENSIONS, ReleaseWindow
from .ownership import DEFAULT_EXPERTISE_THRESHOLD


@dataclass
class RunConfig:
    repo_path: Path
    windows: tuple[ReleaseWindow, ...]
    output_dir: Path
    expertise_threshold: float = DEFAULT_EXPERTISE_THRESHOLD
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS
    alias_map_path: Optional[Path] = None
    labels_path: Optional[Path] = None
    confounders_path: Optional[Path] = None

    def validate(self) -> None:
        if not 0.0 < self.expertise_threshold < 1.0:
            raise UsageError(
                f"expertise threshold must lie in (0, 1); got {self.expertise_threshold}"
            )
        if not self.windows:
            raise UsageError("at least one release window is required")
        if not self.extensions:
            raise UsageError("at least one file extension is required")
        names = [w.name for w in self.windows]
        if len(set(names)) != len(names):
            raise UsageError("release window names must be unique")
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"output directory {self.output_dir} is not writable: {exc}")


def parse_window_spec(spec: str) -> ReleaseWindow:
    """Parse NAME=PRED..REF (empty PRED means full history up to REF)."""
    name, sep, rest = spec.partition("=")
    if not sep or not name:
        raise UsageError(f"window spec {spec!r} must look like NAME=PRED..REF")
    predecessor, dots, release = rest.partition("..")
    if not dots or not release:
        raise UsageError(f"window spec {spec!r} must look like NAME=PRED..REF")
    return ReleaseWindow(
        release_ref=release.strip(),
        predecessor_ref=predecessor.strip(),
        release_name=name.strip(),
    )


def load_config_file(path: Path | str) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from exc


def _windows_from_config(entries) -> list[ReleaseWindow]:
    windows = []
    for entry in entries:
        if "name" not in entry or "ref" not in entry:
            raise UsageError("each [[window]] needs 'name' and 'ref' keys")
        windows.append(
            ReleaseWindow(
                release_ref=str(entry["ref"]),
                predecessor_ref=str(entry.get("predecessor", "")),
                release_name=str(entry["name"]),
            )
        )
    return windows


def build_run_config(args) -> RunConfig:
    """Merge config file values with CLI flags (flags win)."""
    file_values: dict = {}
    if getattr(args, "config", None):
        file_values = load_config_file(args.config)

    repo = getattr(args, "repo", None) or file_values.get("repo")
    if not repo:
        raise UsageError("a repository path is required (--repo or 'repo' in the config)")
    out_dir = getattr(args, "out_dir", None) or file_values.get("out_dir")
    if not out_dir:
        raise UsageError("an output directory is required (--out-dir or 'out_dir')")

    window_specs = getattr(args, "window", None) or []
    if window_specs:
        windows = [parse_window_spec(spec) for spec in window_specs]
    else:
        windows = _windows_from_config(file_values.get("window", []))
    if not windows:
        raise UsageError("at least one window is required (--window or [[window]])")

    threshold = getattr(args, "threshold", None)
    if threshold is None:
        threshold = float(file_values.get("threshold", DEFAULT_EXPERTISE_THRESHOLD))

    extensions_arg = getattr(args, "extensions", None)
    if extensions_arg:
        extensions = tuple(
            ext if ext.startswith(".") else f".{ext}"
            for ext in (part.strip() for part in extensions_arg.split(","))
            if ext
        )
    else:
        extensions = tuple(file_values.get("extensions", list(DEFAULT_EXTENSIONS)))

    def _optional_path(flag: str, key: str) -> Optional[Path]:
        value = getattr(args, flag, None) or file_values.get(key)
        return Path(value) if value else None

    config = RunConfig(
        repo_path=Path(repo),
        windows=tuple(windows),
        output_dir=Path(out_dir),
        expertise_threshold=float(threshold),
        extensions=extensions,
        alias_map_path=_optional_path("aliases", "aliases"),
        labels_path=_optional_path("labels", "labels"),
        confounders_path=_optional_path("confounders", "confounders"),
    )
    config.validate()
    return config
