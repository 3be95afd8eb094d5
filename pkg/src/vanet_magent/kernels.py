"""Hot-kernel dispatch: compiled Cython build if present, else pure Python.

Set ``VANET_MAGENT_PURE=1`` to force the fallback (used by the benchmark and
the backend-equivalence tests).
"""

import os

from . import _kernels_py

BACKEND = "python"

if not os.environ.get("VANET_MAGENT_PURE"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

splitmix64 = _impl.splitmix64
hash4 = _impl.hash4
unit_disk_pairs = _impl.unit_disk_pairs

__all__ = ["BACKEND", "splitmix64", "hash4", "unit_disk_pairs"]
