"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; set
``LGTWAVE_PURE_PYTHON=1`` to force the numpy fallback (used by the
benchmark to compare both paths).
"""

import os

from . import _kernels_py

if os.environ.get("LGTWAVE_PURE_PYTHON"):
    _impl = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _kernels_py
        COMPILED = False

apply_term = _impl.apply_term
apply_sum = _impl.apply_sum


def backend_name() -> str:
    return "cython" if COMPILED else "numpy"
