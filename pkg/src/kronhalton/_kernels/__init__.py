"""Hot kernels with a compiled implementation and a numpy fallback.

The compiled module is used when it imports and the inputs fit its
128-bit arithmetic. Setting ``KRONHALTON_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import importlib
import os

import numpy as np

from . import _pykernels


def _load_compiled():
    if os.environ.get("KRONHALTON_PURE", "") in ("1", "true", "yes"):
        return None
    try:
        return importlib.import_module(f"{__name__}._ckernels")
    except ImportError:  # extension not built
        return None


_ckernels = _load_compiled()

BACKEND = "cython" if _ckernels is not None else "python"

_INT128_LIMIT = 1 << 126


def available_backends() -> dict:
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


def rank_mod_p(mat, p: int) -> int:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.size == 0:
        return 0
    if _ckernels is not None and p < (1 << 31):
        return _ckernels.rank_mod_p(mat, p)
    return _pykernels.rank_mod_p(mat, p)


def star_corner_max(coords, P: int):
    coords = np.asarray(coords)
    N, s = coords.shape
    fits = (coords.dtype != object and P < (1 << 62)
            and (N + 1) * int(P) ** s < _INT128_LIMIT)
    if _ckernels is not None and fits:
        return _ckernels.star_corner_max(coords.astype(np.int64), int(P))
    return _pykernels.star_corner_max(coords, int(P))
