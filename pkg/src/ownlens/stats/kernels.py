"""Backend selection for the numeric kernels.

Two interchangeable implementations ship: numba @njit loops and pure numpy.
The environment flag OWNLENS_KERNEL_BACKEND picks one:

* ``auto`` (default) - numba when importable, numpy otherwise;
* ``numba`` - require numba, fail loudly if missing;
* ``numpy`` - force the fallback (useful for benchmarking and debugging).

Both backends are exact over the same inputs, so the choice never changes
results, only speed. ``benchmarks/bench_kernels.py`` compares them.
"""
from __future__ import annotations

import os
from types import ModuleType

from ..errors import UsageError

ENV_VAR = "OWNLENS_KERNEL_BACKEND"
_CHOICES = ("auto", "numba", "numpy")


def select_backend(choice: str | None = None) -> tuple[ModuleType, str]:
    """Resolve the kernel module for ``choice`` (or the env flag)."""
    if choice is None:
        choice = os.environ.get(ENV_VAR, "auto")
    choice = choice.strip().lower()
    if choice not in _CHOICES:
        raise UsageError(
            f"{ENV_VAR} must be one of {', '.join(_CHOICES)}; got {choice!r}"
        )
    if choice != "numpy":
        try:
            from . import _kernels_numba

            return _kernels_numba, "numba"
        except Exception:
            if choice == "numba":
                raise
    from . import _kernels_numpy

    return _kernels_numpy, "numpy"


_impl, _backend = select_backend()

average_ranks = _impl.average_ranks
dominance_counts = _impl.dominance_counts
ranksum_tail_counts = _impl.ranksum_tail_counts


def backend_name() -> str:
    return _backend
