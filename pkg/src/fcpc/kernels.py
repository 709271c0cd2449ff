"""Backend selection for the hot loops.

The compiled extension is used when it imports; ``FCPC_PURE_PYTHON=1`` forces
the numpy fallback (used by the benchmark and the backend-agreement tests).
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("FCPC_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py


def backend(name: str | None = None):
    """Return the kernel module: "cython", "python", or the active default."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
