from __future__ import annotations


class PipelineError(ValueError):
    """The input data cannot support the requested modeling step."""


class MissingToolError(RuntimeError):
    """A required external tool (the ownership miner CLI) is missing."""
