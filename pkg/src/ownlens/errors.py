"""Exception types shared across the package.

The CLI maps these onto exit codes: UsageError -> 2, VcsError -> 3.
"""
from __future__ import annotations


class UsageError(ValueError):
    """Bad configuration or malformed input supplied by the operator."""


class VcsError(RuntimeError):
    """The version-control system failed or the repository is unreadable."""

    def __init__(self, message: str, stderr: str = ""):
        super().__init__(message)
        self.stderr = stderr
