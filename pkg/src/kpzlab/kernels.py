"""Backend selection for the renormalization-sum kernels.

The compiled extension is used when it imported cleanly; setting
``KPZLAB_PURE_PYTHON=1`` forces the pure-Python fallback.  Both backends
run the identical compensated summation, so results agree to a few ulps.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("KPZLAB_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _as_buffer(phi2):
    import numpy as np

    return np.ascontiguousarray(phi2, dtype=np.float64)


def pair_sums(phi2, kmax: int, tilde: bool) -> tuple[float, float]:
    if BACKEND == "compiled":
        return _impl.pair_sums(_as_buffer(phi2), int(kmax), bool(tilde))
    return _impl.pair_sums(phi2, int(kmax), bool(tilde))


def i1_sum(phi2, kmax: int) -> float:
    if BACKEND == "compiled":
        return _impl.i1_sum(_as_buffer(phi2), int(kmax))
    return _impl.i1_sum(phi2, int(kmax))


def i2_sum(phi2, kmax: int) -> float:
    if BACKEND == "compiled":
        return _impl.i2_sum(_as_buffer(phi2), int(kmax))
    return _impl.i2_sum(phi2, int(kmax))


def weighted_mode_sum(phi2, kmax: int) -> float:
    if BACKEND == "compiled":
        return _impl.weighted_mode_sum(_as_buffer(phi2), int(kmax))
    return _impl.weighted_mode_sum(phi2, int(kmax))
