"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``ELLQ_PURE_PYTHON=1`` to force the pure-Python kernels (used by the
benchmark and by CI environments without a C compiler).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ELLQ_PURE_PYTHON"):
    _impl = _kernels_py
    IMPLEMENTATION = "python"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "cython"
    except ImportError:
        _impl = _kernels_py
        IMPLEMENTATION = "python"

theta = _impl.theta
e_func = _impl.e_func
alpha = _impl.alpha
beta = _impl.beta
alpha_tilde = _impl.alpha_tilde
beta_tilde = _impl.beta_tilde
