"""Idle decoherence as Kraus channels.

Populations relax with T1 and coherences decay with T2, split into
amplitude damping plus the pure-dephasing remainder. Requiring T2 <= 2*T1
at calibration time keeps the dephasing rate nonnegative.
"""

from __future__ import annotations

import math

import numpy as np


def amplitude_damping(gamma: float) -> list[np.ndarray]:
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return [k0, k1]


def phase_damping(flip_probability: float) -> list[np.ndarray]:
    p = flip_probability
    k0 = math.sqrt(1.0 - p) * np.eye(2, dtype=np.complex128)
    k1 = math.sqrt(p) * np.diag([1.0, -1.0]).astype(np.complex128)
    return [k0, k1]


def idle_kraus(seconds: float, t1_us: float, t2_us: float) -> list[np.ndarray] | None:
    """Channel for idling `seconds` on a qubit with the given lifetimes.

    Off-diagonals pick up exp(-t/T2) total: sqrt(1-gamma) from damping and
    the rest from dephasing at rate 1/Tphi = 1/T2 - 1/(2*T1).

    Returns None when the duration is too short to matter.
    """
    if seconds <= 0.0:
        return None
    t1 = t1_us * 1e-6
    t2 = t2_us * 1e-6
    gamma = 1.0 - math.exp(-seconds / t1)
    phi_rate = 1.0 / t2 - 0.5 / t1
    flip = 0.5 * (1.0 - math.exp(-seconds * phi_rate)) if phi_rate > 0.0 else 0.0
    if gamma <= 0.0 and flip <= 0.0:
        return None
    damping = amplitude_damping(gamma)
    if flip <= 0.0:
        return damping
    dephasing = phase_damping(flip)
    return [p @ a for p in dephasing for a in damping]
