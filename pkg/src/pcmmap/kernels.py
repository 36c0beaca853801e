"""Backend selection for the evaluation kernels.

The compiled extension is preferred; the pure-Python implementation is used
when it is missing or when the environment variable ``PCMMAP_PURE`` is set.
"""
import os

if os.environ.get("PCMMAP_PURE"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

eval_forward = _impl.eval_forward
bound_forward = _impl.bound_forward
best_marginal = _impl.best_marginal
edge_maxima = _impl.edge_maxima
