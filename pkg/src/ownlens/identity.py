"""Developer identity resolution.

Git history carries free-form author names and emails, while ownership math
needs one stable key per person. The rule here: the key is the lowercased,
whitespace-trimmed email when present, otherwise the lowercased, trimmed
display name. An optional alias map (CSV with columns raw_key,canonical_key)
rewrites normalized keys, so one person committing under several addresses
collapses to a single developer. Alias chains are flattened at load time,
which keeps resolution idempotent: resolving a resolved identity never
changes its key.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .errors import UsageError


class IdentityError(ValueError):
    """Raised when a contributor record carries neither a name nor an email."""


@dataclass(frozen=True)
class DeveloperIdentity:
    key: str
    display_name: str
    email: str = ""


def normalize_key(raw: str) -> str:
    return raw.strip().lower()


def resolve_identity(
    name: str,
    email: str,
    aliases: Optional[Mapping[str, str]] = None,
) -> DeveloperIdentity:
    """Build the canonical identity for a (name, email) pair.

    Raises IdentityError when both inputs are empty after trimming; callers
    reject the offending record with a diagnostic naming its commit.
    """
    name_trimmed = name.strip()
    email_normalized = normalize_key(email)
    if not name_trimmed and not email_normalized:
        raise IdentityError("contributor has neither a name nor an email")
    key = email_normalized if email_normalized else normalize_key(name_trimmed)
    if aliases:
        key = aliases.get(key, key)
    return DeveloperIdentity(
        key=key,
        display_name=name_trimmed if name_trimmed else key,
        email=email.strip(),
    )


def load_alias_map(path: Path | str) -> dict[str, str]:
    """Read an alias map CSV (header row: raw_key,canonical_key).

    Both columns are normalized; chains (a->b, b->c) are flattened to their
    final target and cycles are rejected.
    """
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise UsageError(f"alias map {path}: expected header raw_key,canonical_key")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise UsageError(f"alias map {path}: line {lineno} needs two columns")
            source = normalize_key(row[0])
            target = normalize_key(row[1])
            if not source or not target:
                raise UsageError(f"alias map {path}: line {lineno} has an empty key")
            if source in raw and raw[source] != target:
                raise UsageError(f"alias map {path}: conflicting entries for {source!r}")
            raw[source] = target
    return _flatten_aliases(raw, str(path))


def _flatten_aliases(raw: Mapping[str, str], origin: str) -> dict[str, str]:
    flat: dict[str, str] = {}
    for source in raw:
        target = raw[source]
        seen = {source}
        while target in raw:
            if target in seen:
                raise UsageError(f"alias map {origin}: cycle involving {target!r}")
            seen.add(target)
            target = raw[target]
        flat[source] = target
    return flat
