"""Backend selection for the hot kernels.

The compiled extension is used when importable; set ``PENTACHAIN_PURE=1``
to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("PENTACHAIN_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

det_int = _impl.det_int
rank_int = _impl.rank_int
merge_sign = _impl.merge_sign
gmul = _impl.gmul
berezin = _impl.berezin
minor_dets = _impl.minor_dets

__all__ = ["BACKEND", "det_int", "rank_int", "merge_sign", "gmul", "berezin", "minor_dets"]
