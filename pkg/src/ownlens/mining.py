"""Git-backed extraction of release-scoped contribution evidence.

Everything downstream works from a ReleaseSnapshot, which bundles two views
of one release window:

* the commits reachable from the release ref and not from its predecessor,
  each with per-file added/deleted line counts taken against the first
  parent (``git log --numstat``), and
* per-line authorship of every filtered file present at the release ref,
  attributing each physical line to the developer who most recently
  modified it (``git blame --line-porcelain``).

The module drives the git CLI and parses its machine-readable output; it
never touches the object store directly. Snapshots are immutable and their
JSON serialization is byte-deterministic for a fixed repository state, which
is what makes rerun comparisons meaningful.

Conventions baked in here (documented choices, not git defaults):

* merge commits are recorded with ``is_merge`` set and their first-parent
  change summary, but ownership counting downstream ignores their file
  changes, so conflict-resolution diffs never double-attribute work;
* rename detection is disabled for commit change summaries (paths are taken
  as recorded), while blame follows its default rename handling;
* binary files are skipped with a diagnostic, and binary entries inside a
  numstat block ("-" counts) are dropped from the change list;
* commits whose author has neither name nor email are rejected with a
  diagnostic naming the commit; blame line groups with the same defect are
  attributed to a deterministic ``unknown:<hash>`` fallback key so line
  totals still match the file's length at the ref.
"""
from __future__ import annotations

import json
import logging
import re
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .errors import UsageError, VcsError
from .identity import DeveloperIdentity, IdentityError, resolve_identity

log = logging.getLogger(__name__)

_RECORD_MARK = "\x01"
_FIELD_SEP = "\x1f"
_LOG_FORMAT = _RECORD_MARK + _FIELD_SEP.join(["%H", "%P", "%at", "%an", "%ae"])
_NUMSTAT_RE = re.compile(r"^(\d+|-)\t(\d+|-)\t(.+)$")
_BLAME_GROUP_RE = re.compile(r"^[0-9a-f]{40} \d+ \d+")

DEFAULT_EXTENSIONS = (".java",)


@dataclass(frozen=True)
class ReleaseWindow:
    """Commit range for one studied release: (predecessor_ref, release_ref]."""

    release_ref: str
    predecessor_ref: str = ""
    release_name: str = ""

    @property
    def name(self) -> str:
        return self.release_name or self.release_ref


@dataclass(frozen=True)
class FileChange:
    path: str
    lines_added: int
    lines_deleted: int


@dataclass(frozen=True)
class CommitRecord:
    hash: str
    author: DeveloperIdentity
    timestamp: int
    is_merge: bool
    file_changes: tuple[FileChange, ...]


@dataclass(frozen=True)
class LineAuthorship:
    """Per-line attribution of one file at the release ref."""

    path: str
    author_line_counts: Mapping[str, int]
    total_lines: int


@dataclass(frozen=True)
class ReleaseSnapshot:
    window: ReleaseWindow
    commits: tuple[CommitRecord, ...]
    file_authorship: Mapping[str, LineAuthorship]
    extensions: tuple[str, ...]
    aliases: Mapping[str, str]

    def to_json(self) -> str:
        """Serialize with sorted keys; byte-identical for identical inputs."""
        payload = {
            "window": {
                "release_ref": self.window.release_ref,
                "predecessor_ref": self.window.predecessor_ref,
                "release_name": self.window.name,
            },
            "commits": [
                {
                    "hash": c.hash,
                    "author": {
                        "key": c.author.key,
                        "display_name": c.author.display_name,
                        "email": c.author.email,
                    },
                    "timestamp": c.timestamp,
                    "is_merge": c.is_merge,
                    "file_changes": [
                        {
                            "path": ch.path,
                            "lines_added": ch.lines_added,
                            "lines_deleted": ch.lines_deleted,
                        }
                        for ch in c.file_changes
                    ],
                }
                for c in self.commits
            ],
            "file_authorship": {
                path: {
                    "author_line_counts": dict(sorted(la.author_line_counts.items())),
                    "total_lines": la.total_lines,
                }
                for path, la in sorted(self.file_authorship.items())
            },
            "config": {
                "extensions": sorted(self.extensions),
                "aliases": dict(sorted(self.aliases.items())),
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def from_json(text: str) -> "ReleaseSnapshot":
        payload = json.loads(text)
        window = ReleaseWindow(
            release_ref=payload["window"]["release_ref"],
            predecessor_ref=payload["window"]["predecessor_ref"],
            release_name=payload["window"]["release_name"],
        )
        commits = tuple(
            CommitRecord(
                hash=c["hash"],
                author=DeveloperIdentity(
                    key=c["author"]["key"],
                    display_name=c["author"]["display_name"],
                    email=c["author"]["email"],
                ),
                timestamp=c["timestamp"],
                is_merge=c["is_merge"],
                file_changes=tuple(
                    FileChange(ch["path"], ch["lines_added"], ch["lines_deleted"])
                    for ch in c["file_changes"]
                ),
            )
            for c in payload["commits"]
        )
        authorship = {
            path: LineAuthorship(
                path=path,
                author_line_counts=dict(entry["author_line_counts"]),
                total_lines=entry["total_lines"],
            )
            for path, entry in payload["file_authorship"].items()
        }
        return ReleaseSnapshot(
            window=window,
            commits=commits,
            file_authorship=authorship,
            extensions=tuple(payload["config"]["extensions"]),
            aliases=dict(payload["config"]["aliases"]),
        )


def run_git(repo: Path | str, *args: str, binary: bool = False) -> str | bytes:
    """Run one git command against ``repo`` and return its stdout."""
    cmd = ["git", "-C", str(repo), "-c", "core.quotepath=false", *args]
    try:
        proc = subprocess.run(cmd, capture_output=True, check=False)
    except OSError as exc:
        raise VcsError(f"failed to invoke git: {exc}") from exc
    if proc.returncode != 0:
        stderr = proc.stderr.decode("utf-8", errors="replace").strip()
        raise VcsError(f"git {' '.join(args[:2])} failed: {stderr}", stderr=stderr)
    if binary:
        return proc.stdout
    return proc.stdout.decode("utf-8", errors="replace")


def resolve_ref(repo: Path | str, ref: str) -> str:
    """Resolve a tag or commit-ish to a full commit id.

    Unresolvable refs are a configuration problem (UsageError naming the
    ref); an unreadable repository stays a VcsError.
    """
    try:
        out = run_git(repo, "rev-parse", "--verify", "--quiet", f"{ref}^{{commit}}")
    except VcsError as exc:
        # --quiet keeps stderr empty for an unknown revision; anything git
        # does complain about (unreadable repo, bad object store) stays a
        # VCS failure.
        if exc.stderr.strip():
            raise
        raise UsageError(f"cannot resolve ref {ref!r} in repository {repo}") from exc
    sha = str(out).strip()
    if not sha:
        raise UsageError(f"cannot resolve ref {ref!r} in repository {repo}")
    return sha


@dataclass
class _RawCommit:
    hash: str
    parents: tuple[str, ...]
    timestamp: int
    author_name: str
    author_email: str
    changes: list[FileChange] = field(default_factory=list)


def parse_numstat_log(text: str) -> list[_RawCommit]:
    """Parse ``git log --numstat`` output in the record format used here.

    Each commit starts with a control-character-marked header line carrying
    hash, parents, author timestamp, author name and email; the numstat
    block follows with one ``added<TAB>deleted<TAB>path`` line per file and
    "-" counts for binary entries (dropped, with a debug note).
    """
    records: list[_RawCommit] = []
    current: _RawCommit | None = None
    for line in text.split("\n"):
        if line.startswith(_RECORD_MARK):
            fields = line[1:].split(_FIELD_SEP)
            if len(fields) != 5:
                raise VcsError(f"unexpected log record line: {line!r}")
            sha, parents, timestamp, name, email = fields
            current = _RawCommit(
                hash=sha,
                parents=tuple(parents.split()),
                timestamp=int(timestamp),
                author_name=name,
                author_email=email,
            )
            records.append(current)
        elif not line.strip():
            continue
        else:
            match = _NUMSTAT_RE.match(line)
            if match is None or current is None:
                raise VcsError(f"unparseable numstat line: {line!r}")
            added, deleted, path = match.groups()
            if added == "-" or deleted == "-":
                log.debug("commit %s: dropping binary change entry %s", current.hash, path)
                continue
            current.changes.append(FileChange(path, int(added), int(deleted)))
    return records


def enumerate_release_commits(
    repo: Path | str,
    window: ReleaseWindow,
    aliases: Optional[Mapping[str, str]] = None,
) -> list[CommitRecord]:
    """List the commits of one release window, oldest first.

    The set is exactly "reachable from release_ref, not reachable from
    predecessor_ref" (full history when the predecessor is empty). Ordering
    is git's date order under topology constraints, reversed to oldest
    first, which is deterministic for a fixed repository state. Merge
    commits carry their first-parent change summary and is_merge=True.
    """
    release = resolve_ref(repo, window.release_ref)
    args = [
        "log",
        "--date-order",
        "--reverse",
        "--no-renames",
        "--numstat",
        "--diff-merges=first-parent",
        f"--pretty=tformat:{_LOG_FORMAT}",
        release,
    ]
    if window.predecessor_ref:
        args.append("^" + resolve_ref(repo, window.predecessor_ref))
    text = str(run_git(repo, *args))
    commits: list[CommitRecord] = []
    for raw in parse_numstat_log(text):
        try:
            author = resolve_identity(raw.author_name, raw.author_email, aliases)
        except IdentityError:
            log.warning(
                "rejecting commit %s: author has neither name nor email", raw.hash
            )
            continue
        commits.append(
            CommitRecord(
                hash=raw.hash,
                author=author,
                timestamp=raw.timestamp,
                is_merge=len(raw.parents) > 1,
                file_changes=tuple(sorted(raw.changes, key=lambda ch: ch.path)),
            )
        )
    return commits


def list_blob_paths(repo: Path | str, sha: str) -> list[str]:
    """All blob paths in the tree at ``sha`` (submodules excluded)."""
    out = str(run_git(repo, "ls-tree", "-r", "-z", sha))
    paths = []
    for entry in out.split("\0"):
        if not entry:
            continue
        meta, _, path = entry.partition("\t")
        parts = meta.split()
        if len(parts) >= 2 and parts[1] == "blob":
            paths.append(path)
    return paths


def parse_blame_porcelain(text: str) -> list[tuple[str, str, str]]:
    """Flatten ``git blame --line-porcelain`` output.

    Returns one (commit_hash, author_name, author_email) triple per physical
    line of the blamed file. In line-porcelain form every line group repeats
    the full header, so author fields are always fresh by the time the
    tab-prefixed content line arrives.
    """
    triples: list[tuple[str, str, str]] = []
    sha = ""
    name = ""
    mail = ""
    for line in text.split("\n"):
        if line.startswith("\t"):
            triples.append((sha, name, mail))
        elif _BLAME_GROUP_RE.match(line):
            sha = line.split(" ", 1)[0]
        elif line.startswith("author "):
            name = line[len("author "):]
        elif line.startswith("author-mail "):
            mail = line[len("author-mail "):].strip()
            if mail.startswith("<") and mail.endswith(">"):
                mail = mail[1:-1]
    return triples


def _blame_one_file(
    repo: Path | str,
    sha: str,
    path: str,
    release_ref: str,
    aliases: Optional[Mapping[str, str]],
) -> Optional[LineAuthorship]:
    raw = run_git(repo, "blame", "--line-porcelain", sha, "--", path, binary=True)
    assert isinstance(raw, bytes)
    if b"\x00" in raw:
        log.warning("skipping binary file %s at %s", path, release_ref)
        return None
    counts: dict[str, int] = {}
    total = 0
    cache: dict[tuple[str, str], DeveloperIdentity] = {}
    for line_sha, name, mail in parse_blame_porcelain(raw.decode("utf-8", errors="replace")):
        total += 1
        ident = cache.get((name, mail))
        if ident is None:
            try:
                ident = resolve_identity(name, mail, aliases)
            except IdentityError:
                # Deterministic fallback key keeps line totals equal to the
                # file's length even for authorless line groups.
                log.warning(
                    "blame of %s: commit %s has no author identity; using fallback key",
                    path,
                    line_sha,
                )
                ident = resolve_identity(f"unknown:{line_sha[:12]}", "", aliases)
            cache[(name, mail)] = ident
        counts[ident.key] = counts.get(ident.key, 0) + 1
    return LineAuthorship(
        path=path,
        author_line_counts=dict(sorted(counts.items())),
        total_lines=total,
    )


def blame_release_files(
    repo: Path | str,
    release_ref: str,
    extensions: Sequence[str] = DEFAULT_EXTENSIONS,
    aliases: Optional[Mapping[str, str]] = None,
    max_workers: int = 8,
) -> dict[str, LineAuthorship]:
    """Blame every filtered file present at ``release_ref``.

    Per-file blame calls run on a small thread pool (git subprocesses
    release the GIL); results are merged into a path-sorted map so the
    outcome is independent of completion order. Binary files are skipped
    with a diagnostic; empty files yield total_lines == 0.
    """
    if not extensions:
        raise UsageError("file filter must list at least one extension")
    sha = resolve_ref(repo, release_ref)
    suffixes = tuple(extensions)
    paths = sorted(p for p in list_blob_paths(repo, sha) if p.endswith(suffixes))
    results: dict[str, LineAuthorship] = {}
    if not paths:
        return results
    workers = max(1, min(max_workers, len(paths)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for path, authorship in zip(
            paths,
            pool.map(
                lambda p: _blame_one_file(repo, sha, p, release_ref, aliases), paths
            ),
        ):
            if authorship is not None:
                results[path] = authorship
    return dict(sorted(results.items()))


def build_snapshot(
    repo: Path | str,
    window: ReleaseWindow,
    extensions: Sequence[str] = DEFAULT_EXTENSIONS,
    aliases: Optional[Mapping[str, str]] = None,
) -> ReleaseSnapshot:
    """Compose commit enumeration and release-ref blame into one snapshot.

    Identity resolution (including the alias map) applies uniformly to both
    evidence sources, so commit authors and line authors share keys.
    """
    commits = enumerate_release_commits(repo, window, aliases)
    authorship = blame_release_files(repo, window.release_ref, extensions, aliases)
    return ReleaseSnapshot(
        window=window,
        commits=tuple(commits),
        file_authorship=authorship,
        extensions=tuple(sorted(extensions)),
        aliases=dict(aliases or {}),
    )
