"""Select the stepping kernel at import: compiled extension when available.

Set ENTROKIN_PURE_PYTHON=1 to force the pure-Python twin (used by the
benchmark and by the backend parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("ENTROKIN_PURE_PYTHON") == "1":
    from . import _kernel_py as kernel
else:
    try:
        from . import _kernel as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_py as kernel  # type: ignore[no-redef]

BACKEND = kernel.BACKEND_NAME


def backend_name() -> str:
    """Name of the active stepping kernel: 'compiled' or 'python'."""
    return BACKEND
