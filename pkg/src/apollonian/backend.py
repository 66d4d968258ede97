"""Kernel backend selection: compiled extension when built, pure Python otherwise.

Set APOLLONIAN_PURE=1 to force the fallback (used by the equivalence tests
and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("APOLLONIAN_PURE"):
    kernels = _kernels_py
    BACKEND = "pure"
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]

        kernels = _kernels
        BACKEND = "compiled"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "pure"


def available_backends() -> dict:
    """Name -> module for every importable kernel backend."""
    out = {"pure": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
