"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports, unless the
environment variable ``QCLOGIC_PURE_PYTHON`` is set to a non-empty value.
``cover_search`` falls back to Python for truth tables wider than 64 bits.
"""
from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if not os.environ.get("QCLOGIC_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def simulate(kinds, targets, pos, neg, inputs, backend: str | None = None):
    impl = _pick(backend)
    return impl.simulate(kinds, targets, pos, neg, inputs)


def cover_search(masks, costs, target, n_inputs, max_depth, bound, collect=False,
                 node_limit=0, deadline=0.0, backend: str | None = None):
    impl = _pick(backend)
    if n_inputs > 64:
        impl = _kernels_py
    return impl.cover_search(masks, costs, target, n_inputs, max_depth, bound,
                             collect, node_limit, deadline)


def _pick(backend: str | None):
    if backend is None:
        return _compiled or _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
