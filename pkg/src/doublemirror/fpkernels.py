"""Kernel backend selection: compiled extension with numpy fallback.

Importing this module binds ``scan_roots`` and ``eval_poly_many`` to the
fastest available implementation.  Set ``DOUBLEMIRROR_PURE=1`` to force the
fallback (the benchmark uses this to compare both).
"""

from __future__ import annotations

import os

if os.environ.get("DOUBLEMIRROR_PURE") == "1":
    from . import _pykernels as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
scan_roots = _impl.scan_roots
eval_poly_many = _impl.eval_poly_many
