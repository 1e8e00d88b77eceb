"""Backend selection for the hot loops.

The compiled ``_core`` extension is used when it was built and importable;
``SPECIND_PURE_PYTHON=1`` forces the numpy fallback. ``BACKEND`` names the
active choice and ``backends()`` exposes both for tests and benchmarks.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _fallback

try:  # pragma: no cover - depends on the build
    from . import _core as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

if _compiled is not None and not os.environ.get("SPECIND_PURE_PYTHON"):
    _active: ModuleType = _compiled
    BACKEND = "compiled"
else:
    _active = _fallback
    BACKEND = "python"

jacobi_eigh = _active.jacobi_eigh
glauber_hardcore = _active.glauber_hardcore
shatter_counts = _active.shatter_counts
shatter_counts_masks = _active.shatter_counts_masks


def backends() -> dict[str, ModuleType]:
    out = {"python": _fallback}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
