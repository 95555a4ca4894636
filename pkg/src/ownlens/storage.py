"""File formats and atomic writes.

All CSV output uses one dialect: UTF-8, comma separator, header row, LF line
endings, ratios with six decimal places, counts as plain integers, empty
string for absent values. Writers go through a temp-file-plus-rename so a
failed run never leaves a partial file behind.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import UsageError


def format_ratio(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def format_count(value: int) -> str:
    return str(int(value))


def atomic_write_text(path: Path | str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_bytes(path: Path | str, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence[str]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().encode("utf-8")


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    atomic_write_bytes(path, csv_bytes(header, rows))


def read_csv(path: Path | str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None:
                raise UsageError(f"{path}: empty CSV")
            return header, [row for row in reader]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def write_json(path: Path | str, payload) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    atomic_write_text(path, text)


def read_labels(path: Path | str) -> dict[str, int]:
    """Defect labels: CSV with columns path,defective (0/1); duplicates rejected."""
    header, rows = read_csv(path)
    if len(header) < 2:
        raise UsageError(f"{path}: labels file needs columns path,defective")
    labels: dict[str, int] = {}
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise UsageError(f"{path}: line {lineno} needs two columns")
        file_path, flag = row[0], row[1].strip()
        if file_path in labels:
            raise UsageError(f"{path}: duplicate label for {file_path!r}")
        if flag not in ("0", "1"):
            raise UsageError(f"{path}: line {lineno}: defective must be 0 or 1")
        labels[file_path] = int(flag)
    return labels


def read_confounders(path: Path | str) -> tuple[list[str], dict[str, list[str]]]:
    """External metric columns keyed by path; values pass through verbatim."""
    header, rows = read_csv(path)
    if not header or header[0] != "path":
        raise UsageError(f"{path}: confounder file must start with a 'path' column")
    extra_columns = header[1:]
    table: dict[str, list[str]] = {}
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise UsageError(f"{path}: line {lineno} has {len(row)} columns, expected {len(header)}")
        if row[0] in table:
            raise UsageError(f"{path}: duplicate confounder row for {row[0]!r}")
        table[row[0]] = row[1:]
    return extra_columns, table


def read_group_values(path: Path | str) -> dict[str, list[float]]:
    """Two-column (group_id, value) CSV for the npsk command."""
    header, rows = read_csv(path)
    if len(header) != 2:
        raise UsageError(f"{path}: expected exactly two columns (group_id, value)")
    groups: dict[str, list[float]] = {}
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise UsageError(f"{path}: line {lineno} needs two columns")
        try:
            value = float(row[1])
        except ValueError as exc:
            raise UsageError(f"{path}: line {lineno}: {row[1]!r} is not a number") from exc
        groups.setdefault(row[0], []).append(value)
    if not groups:
        raise UsageError(f"{path}: no data rows")
    return groups
