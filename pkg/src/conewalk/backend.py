"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin
is the fallback.  ``CONEWALK_BACKEND=py`` or ``=c`` forces a choice (``c``
raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _ckern
except ImportError:
    _ckern = None

HAS_COMPILED = _ckern is not None

_BY_NAME = {"py": _kernels_py, "python": _kernels_py, "pure": _kernels_py}
if HAS_COMPILED:
    _BY_NAME.update({"c": _ckern, "compiled": _ckern, "ext": _ckern})


def get_kernel(name: str | None = None):
    """Kernel module for ``name`` (None/'auto' selects the default)."""
    if name is None or name in ("", "auto"):
        forced = os.environ.get("CONEWALK_BACKEND", "").strip().lower()
        if forced and forced != "auto":
            return get_kernel(forced)
        return _ckern if HAS_COMPILED else _kernels_py
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        if name.lower() in ("c", "compiled", "ext"):
            raise RuntimeError(
                "compiled kernel requested but conewalk._ckern is not built"
            ) from None
        raise ValueError(f"unknown backend {name!r}") from None


def backend_name(kernel) -> str:
    return "compiled" if getattr(kernel, "IS_COMPILED", False) else "python"
