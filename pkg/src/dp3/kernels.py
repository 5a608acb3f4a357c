"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``DP3_BACKEND=python`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("DP3_BACKEND", "").lower() != "python":
    try:
        from . import _kernels_cy as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

nonlocal_source = _impl.nonlocal_source
flux_source = _impl.flux_source
trig_eval = _impl.trig_eval
omega_profile = _impl.omega_profile

__all__ = ["BACKEND", "nonlocal_source", "flux_source", "trig_eval", "omega_profile"]
