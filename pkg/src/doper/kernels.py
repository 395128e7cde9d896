"""Backend selection for the arithmetic inner loops.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Setting ``DOPER_PURE_PYTHON=1`` forces the fallback,
which is how the benchmark and the equivalence tests reach both versions.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("DOPER_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

poly_add = _impl.poly_add
poly_sub = _impl.poly_sub
poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
poly_eval = _impl.poly_eval
cyclic_mul = _impl.cyclic_mul
mask_star = _impl.mask_star
mask_rot = _impl.mask_rot
mask_canon = _impl.mask_canon
involution_scan = _impl.involution_scan
necklace_scan = _impl.necklace_scan

__all__ = [
    "BACKEND",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_divmod",
    "poly_eval",
    "cyclic_mul",
    "mask_star",
    "mask_rot",
    "mask_canon",
    "involution_scan",
    "necklace_scan",
]
