"""Hot numerical kernels, compiled when available.

The compiled extension is optional: a pure-numpy implementation with the
same contract is selected automatically when the build is absent. Set
PULSEGUARD_KERNELS=c to require the extension (import fails without it)
or PULSEGUARD_KERNELS=py to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from pulseguard._kernels import _pykernels

_requested = os.environ.get("PULSEGUARD_KERNELS", "").strip().lower()
if _requested not in ("", "c", "py", "python"):
    raise ImportError(
        f"PULSEGUARD_KERNELS must be 'c' or 'py', not {_requested!r}"
    )

KERNEL_BACKEND = "python"
_impl = _pykernels.su2_window

if _requested in ("", "c"):
    try:
        from pulseguard._kernels import _ckernels
    except ImportError:
        if _requested == "c":
            raise
    else:
        KERNEL_BACKEND = "c"
        _impl = _ckernels.su2_window


def su2_window(weights, rabi_dt: float, detune_angle: float) -> np.ndarray:
    """Time-ordered 2x2 propagator for one drive window.

    See _pykernels.su2_window for the sample-level definition. Both lanes
    agree to floating-point roundoff.
    """
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    return _impl(w, float(rabi_dt), float(detune_angle))


def backend_functions() -> dict:
    """Every importable lane, keyed by name. Used by tests and benchmarks."""
    lanes = {"python": _pykernels.su2_window}
    try:
        from pulseguard._kernels import _ckernels
    except ImportError:
        pass
    else:
        lanes["c"] = _ckernels.su2_window
    return lanes


__all__ = ["KERNEL_BACKEND", "su2_window", "backend_functions"]
