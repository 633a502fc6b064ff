"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``FMCARD_PURE_KERNELS=1`` to force the fallback (used by the benchmark
to compare the two implementations).
"""

import os

if os.environ.get("FMCARD_PURE_KERNELS"):
    from . import _corridor_py as _impl

    KERNEL_IMPL = "pure"
else:
    try:
        from . import _corridor as _impl  # type: ignore[attr-defined]

        KERNEL_IMPL = "compiled"
    except ImportError:
        from . import _corridor_py as _impl

        KERNEL_IMPL = "pure"

fit_corridor = _impl.fit_corridor
eval_spline = _impl.eval_spline
max_fit_error = _impl.max_fit_error

__all__ = ["KERNEL_IMPL", "fit_corridor", "eval_spline", "max_fit_error"]
