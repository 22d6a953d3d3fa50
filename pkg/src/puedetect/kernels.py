"""Backend selection for the batched kernels.

The compiled extension is used when it imports; setting ``PUEDETECT_PURE=1``
forces the numpy fallback. ``BACKEND`` names whichever was picked.
"""

import os

from . import _kernels_py

if os.environ.get("PUEDETECT_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

interval_flags = _impl.interval_flags
group_dhat = _impl.group_dhat
sgd_epoch = _impl.sgd_epoch

__all__ = ["BACKEND", "interval_flags", "group_dhat", "sgd_epoch"]
