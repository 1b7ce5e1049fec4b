"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python twin when it
is missing or when the environment variable HYPJSL_PURE_PYTHON is set.
"""

from __future__ import annotations

import os

if os.environ.get("HYPJSL_PURE_PYTHON"):
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        COMPILED = False

fpc_max_defect = _impl.fpc_max_defect
product_scan = _impl.product_scan
