"""Backend selection for the point-location kernel.

The compiled Cython kernel (lgfem._walk) is used when available; the
vectorized numpy implementation (lgfem._walk_py) is the fallback and the
reference for behavior.  Set LGFEM_PURE_PYTHON=1 to force the fallback.
Both implement identical hop and tie-break rules, so the selected backend
never changes results, only speed.
"""

from __future__ import annotations

import os

from . import _walk_py

if os.environ.get("LGFEM_PURE_PYTHON"):
    _impl = _walk_py
else:
    try:
        from . import _walk as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _walk_py

walk = _impl.walk


def backend_name() -> str:
    return "compiled" if _impl.__name__.endswith("._walk") else "python"
