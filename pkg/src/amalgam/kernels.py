"""Kernel backend selection.

Imports the compiled extension when it is built and usable, otherwise the
pure NumPy implementation.  Setting AMALGAM_PURE=1 forces the fallback, which
is how the two backends get benchmarked and cross-checked.
"""

from __future__ import annotations

import os

if os.environ.get("AMALGAM_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

BACKEND: str = _impl.BACKEND

size_table = _impl.size_table
delta_table = _impl.delta_table
superset_min_table = _impl.superset_min_table
min_delta_per_size = _impl.min_delta_per_size
cyclic_solutions = _impl.cyclic_solutions
