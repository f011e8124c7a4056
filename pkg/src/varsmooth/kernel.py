"""Kernel selection: compiled extension when available, pure Python otherwise.

The environment variable VARSMOOTH_KERNEL forces a backend: "python" skips
the compiled module, "compiled" makes its absence an error.  Both modules
share one contract; see _kernel_py for its statement.
"""

from __future__ import annotations

import os

from . import _kernel_py

_forced = os.environ.get("VARSMOOTH_KERNEL", "").strip().lower()

compiled = None
if _forced != "python":
    try:
        from . import _speedups as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None
        if _forced == "compiled":
            raise ImportError(
                "VARSMOOTH_KERNEL=compiled but the _speedups extension "
                "is not built")

active = compiled if compiled is not None else _kernel_py


def backend_name() -> str:
    return active.BACKEND
