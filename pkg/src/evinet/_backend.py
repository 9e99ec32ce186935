"""Kernel selection: the compiled extension when importable, pure Python otherwise.

Set EVINET_PURE_PYTHON=1 to force the fallback (used by the benchmark and tests).
"""

from __future__ import annotations

import os

if os.environ.get("EVINET_PURE_PYTHON"):
    from . import _kernels_py as _kernels
else:
    try:
        from . import _speedups as _kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _kernels

fill_rows = _kernels.fill_rows
backend_name = _kernels.backend_name
