"""Selects the compiled kernel when it is importable.

Set ``KOSZUL_PURE=1`` in the environment to force the pure-Python kernel.
"""

import os

from . import _pykernel

BACKEND = "python"
_impl = _pykernel

if os.environ.get("KOSZUL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernel

mono_mul = _impl.mono_mul
poly_mul = _impl.poly_mul
left_derivative = _impl.left_derivative
OrderingKernel = _impl.OrderingKernel
