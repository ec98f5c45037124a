"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``ABELJACOBI_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("ABELJACOBI_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

continuation_ratio = _impl.continuation_ratio
piece_integrals = _impl.piece_integrals
arg_increment = _impl.arg_increment
segment_crossings = _impl.segment_crossings
