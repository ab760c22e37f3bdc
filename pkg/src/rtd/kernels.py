"""Selects the compiled kernel backend, falling back to pure NumPy.

Set RTD_PURE_PYTHON=1 in the environment (before import) to force the
fallback; ``set_backend`` switches at runtime, which the benchmark uses to
compare both on the same process.
"""

import os

from . import _kernels_py

try:
    from . import _kernels
except ImportError:
    _kernels = None


def available_backends():
    names = ["python"]
    if _kernels is not None:
        names.insert(0, "cython")
    return names


def set_backend(name):
    """Bind module-level kernel functions to the named backend."""
    global _impl, BACKEND, pullback_residual, scatter_add_delta, scatter_add
    if name == "cython":
        if _kernels is None:
            raise ValueError("compiled kernels are not available")
        _impl = _kernels
    elif name == "python":
        _impl = _kernels_py
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    BACKEND = _impl.BACKEND
    pullback_residual = _impl.pullback_residual
    scatter_add_delta = _impl.scatter_add_delta
    scatter_add = _impl.scatter_add


if os.environ.get("RTD_PURE_PYTHON"):
    set_backend("python")
else:
    set_backend("cython" if _kernels is not None else "python")
