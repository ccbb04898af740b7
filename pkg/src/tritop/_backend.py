"""Select the compiled kernels when available, else the numpy fallback.

Set ``TRITOP_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"
if os.environ.get("TRITOP_PURE_PYTHON", "") in ("", "0"):
    try:
        from tritop import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from tritop import _fallback as kernels
else:
    from tritop import _fallback as kernels

__all__ = ["BACKEND", "kernels"]
