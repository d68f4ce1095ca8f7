"""Kernel backend selection: compiled extension when available, pure Python
otherwise. ``DSCALC_PURE_KERNELS=1`` forces the fallback."""

from __future__ import annotations

import os

from . import pure

if os.environ.get("DSCALC_PURE_KERNELS"):
    backend = pure
    COMPILED = False
else:
    try:
        from . import _ckernels as backend  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        backend = pure
        COMPILED = False

BACKEND_NAME = "compiled" if COMPILED else "pure"


def get_backend(name: str | None = None):
    """Fetch a backend by name ("compiled" | "pure"); default is the active one."""
    if name in (None, BACKEND_NAME):
        return backend
    if name == "pure":
        return pure
    if name == "compiled":
        from . import _ckernels  # raises ImportError when unavailable

        return _ckernels
    raise ValueError("unknown backend %r" % name)
