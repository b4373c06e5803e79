"""Kernel selection: the compiled extension when importable, else the pure-Python fallback.

Set ``KPZLAB_KERNELS=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

KERNELS_ENV = "KPZLAB_KERNELS"

compiled = None
if os.environ.get(KERNELS_ENV, "").lower() != "python":
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else _kernels_py
BACKEND = "cython" if compiled is not None else "python"

lis_length = _impl.lis_length
lis_segments = _impl.lis_segments
last_passage = _impl.last_passage
last_passage_batch = _impl.last_passage_batch

IMPLEMENTATIONS = {"python": _kernels_py}
if compiled is not None:
    IMPLEMENTATIONS["cython"] = compiled
