"""Pure-numpy lane for the SU(2) window product.

The simulator spends nearly all of its time multiplying per-sample 2x2
propagators, so this module builds all of them vectorized and folds the
stack pairwise instead of looping in Python.
"""

from __future__ import annotations

import numpy as np


def su2_window(
    weights: np.ndarray, rabi_dt: float, detune_angle: float
) -> np.ndarray:
    """Time-ordered propagator for one drive window on a two-level system.

    Sample k applies exp(-i*(a_k*sx + b_k*sy + c*sz)) followed by a frame
    rotation Rz(detune_angle), where a_k + i*b_k = (rabi_dt/2) * weights[k]
    and c = -detune_angle/2. Exact for piecewise-constant envelopes; an
    all-zero window collapses to the identity.

    Args:
        weights: Complex drive weights, one per sample, already carrying
            the frame phase.
        rabi_dt: Rotation angle per unit weight per sample (rad).
        detune_angle: Frame-minus-qubit phase advance per sample (rad).

    Returns:
        The 2x2 product U_{n-1} @ ... @ U_0, complex128.
    """
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    n = w.shape[0]
    if n == 0:
        return np.eye(2, dtype=np.complex128)

    a = (0.5 * rabi_dt) * w.real
    b = (0.5 * rabi_dt) * w.imag
    c = -0.5 * detune_angle
    r = np.sqrt(a * a + b * b + c * c)
    s = np.sinc(r / np.pi)
    cos_r = np.cos(r)

    mats = np.empty((n, 2, 2), dtype=np.complex128)
    mats[:, 0, 0] = cos_r - 1j * (s * c)
    mats[:, 0, 1] = -(s * b) - 1j * (s * a)
    mats[:, 1, 0] = (s * b) - 1j * (s * a)
    mats[:, 1, 1] = cos_r + 1j * (s * c)
    if detune_angle != 0.0:
        half = 0.5 * detune_angle
        mats[:, 0, :] *= np.exp(-1j * half)
        mats[:, 1, :] *= np.exp(1j * half)

    # Pairwise fold: combined[i] = mats[2i+1] @ mats[2i]; an odd leftover
    # is the latest sample, so it stays at the end of the stack.
    while mats.shape[0] > 1:
        m = mats.shape[0]
        even = mats[0 : m - (m % 2) : 2]
        odd = mats[1:m:2]
        combined = odd @ even
        if m % 2:
            combined = np.concatenate([combined, mats[m - 1 : m]], axis=0)
        mats = combined
    return mats[0]
