"""Backend selection for the hot search kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise the
pure-Python ``_purepy`` module is used.  Set ``BOOLCSP_PURE=1`` to force the
fallback.
"""

import os

from . import _purepy

if os.environ.get("BOOLCSP_PURE"):
    _impl = _purepy
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _purepy
        BACKEND = "python"

search = _impl.search
qeval = _impl.qeval
find_violation = _impl.find_violation

BACKENDS = {"python": _purepy}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl
else:
    try:
        from . import _speedups

        BACKENDS["cython"] = _speedups
    except ImportError:
        pass
