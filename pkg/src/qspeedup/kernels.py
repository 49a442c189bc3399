"""Backend selection for the minimax search kernel.

The compiled extension is used when it was built and the family fits in 64
bits; otherwise the pure-Python solver runs. Set ``QSPEEDUP_KERNEL=python`` to
force the fallback.
"""

from __future__ import annotations

import os

from . import _minimax_py

try:
    from . import _minimax as _compiled
except ImportError:  # extension not built
    _compiled = None

COMPILED_AVAILABLE = _compiled is not None


def backend() -> str:
    if _compiled is None or os.environ.get("QSPEEDUP_KERNEL", "").lower() == "python":
        return "python"
    return "cython"


def make_solver(value_masks, label_masks, n_members: int, prefer: str | None = None):
    """Return a solver with a ``depth(mask)`` method for the given member masks."""
    choice = prefer or backend()
    if choice == "cython" and _compiled is not None and n_members <= 64:
        return _compiled.MinimaxSolver(value_masks, label_masks)
    return _minimax_py.MinimaxSolver(value_masks, label_masks)
