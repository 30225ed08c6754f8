"""Backend selection for the recurrence kernels.

The compiled extension is used when it imports; set
``SBTOEPLITZ_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

if os.environ.get("SBTOEPLITZ_PURE_PYTHON"):
    from . import _pykernels as _impl
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl
        BACKEND = "python"

laguerre_rows = _impl.laguerre_rows
hermite_fn_rows = _impl.hermite_fn_rows
christoffel_log = _impl.christoffel_log

__all__ = ["BACKEND", "laguerre_rows", "hermite_fn_rows", "christoffel_log"]
