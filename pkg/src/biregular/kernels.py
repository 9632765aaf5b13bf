"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python twin in ``_kernels_py``.  Setting ``BIREGULAR_PURE_PYTHON=1``
forces the fallback.  Inputs beyond the compiled kernels' fixed-width limits
are routed to the Python implementation regardless of backend.
"""
from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("BIREGULAR_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def hall_scan(adj: list[int], n_left: int) -> tuple[int, int, int]:
    if _ckernels is not None and n_left <= _ckernels.MAX_HALL_LEFT and all(
            a >> _ckernels.MAX_HALL_RIGHT == 0 for a in adj):
        return _ckernels.hall_scan(adj, n_left)
    return _kernels_py.hall_scan(adj, n_left)


def involution_search(u, v, n: int, k: int, node_budget: int = 0):
    if _ckernels is not None and len(u) <= _ckernels.MAX_EDGES and n * k <= _ckernels.MAX_EDGES:
        return _ckernels.involution_search(list(u), list(v), n, k, node_budget)
    return _kernels_py.involution_search(list(u), list(v), n, k, node_budget)
