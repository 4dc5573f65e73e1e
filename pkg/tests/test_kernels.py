"""SU(2) window kernel: lane parity and closed-form oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from pulseguard._kernels import KERNEL_BACKEND, backend_functions, su2_window

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def sample_oracle(w: complex, rabi_dt: float, detune: float) -> np.ndarray:
    """One sample, straight from the definition, via scipy's expm."""
    a = 0.5 * rabi_dt * w.real
    b = 0.5 * rabi_dt * w.imag
    c = -0.5 * detune
    frame = np.diag([np.exp(-0.5j * detune), np.exp(0.5j * detune)])
    return frame @ expm(-1j * (a * SX + b * SY + c * SZ))


weights_arrays = st.lists(
    st.complex_numbers(max_magnitude=0.3, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=64,
).map(lambda xs: np.array(xs, dtype=complex))


def test_empty_window_is_identity():
    np.testing.assert_array_equal(
        su2_window(np.zeros(0, dtype=complex), 0.7, 0.3), np.eye(2)
    )


@given(weights_arrays, st.floats(0.0, 0.2), st.floats(-0.1, 0.1))
@settings(max_examples=60, deadline=None)
def test_window_is_unitary(weights, rabi_dt, detune):
    u = su2_window(weights, rabi_dt, detune)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)


@given(weights_arrays, st.floats(0.0, 0.2), st.floats(-0.1, 0.1))
@settings(max_examples=40, deadline=None)
def test_window_matches_per_sample_expm(weights, rabi_dt, detune):
    u = np.eye(2, dtype=complex)
    for w in weights:
        u = sample_oracle(complex(w), rabi_dt, detune) @ u
    np.testing.assert_allclose(su2_window(weights, rabi_dt, detune), u, atol=1e-10)


@pytest.mark.parametrize("angle", [0.1, np.pi / 2, np.pi, 2.0])
def test_resonant_constant_drive_rotates_about_x(angle):
    # n samples of constant real drive compose to Rx(n * rabi_dt * w).
    n = 400
    w = 0.05
    rabi_dt = angle / (n * w)
    u = su2_window(np.full(n, w, dtype=complex), rabi_dt, 0.0)
    expected = expm(-0.5j * angle * SX)
    np.testing.assert_allclose(u, expected, atol=1e-12)


def test_pure_detuning_is_frame_rotation_only():
    # Zero drive: each sample contributes exp(+i d/2 Z) then Rz(d), which
    # cancels to the identity; the window must collapse exactly.
    u = su2_window(np.zeros(37, dtype=complex), 0.9, 0.123)
    np.testing.assert_allclose(u, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("ratio", [0.0, 0.5, 1.0, 2.0])
def test_detuned_rabi_peak_excitation(ratio):
    # Caller contract: weights carry the frame phase advance, one
    # detune_angle step per sample. A constant envelope then evolves under
    # the textbook H = (omega X + delta Z) / 2, whose max excitation is
    # 1 / (1 + (delta/omega)^2) half a generalized period in. The integer
    # sample grid only costs O(per-sample angle squared) at the peak.
    omega = 2e-3
    delta = ratio * omega
    n_star = int(round(np.pi / np.sqrt(omega**2 + delta**2)))
    best = 0.0
    for n in range(max(1, n_star - 3), n_star + 4):
        weights = np.exp(1j * delta * np.arange(n))
        u = su2_window(weights, omega, delta)
        best = max(best, abs(u[1, 0]) ** 2)
    assert best == pytest.approx(1.0 / (1.0 + ratio**2), abs=1e-3)


@pytest.mark.skipif(
    len(backend_functions()) < 2, reason="compiled lane not built"
)
@given(weights_arrays, st.floats(0.0, 0.2), st.floats(-0.1, 0.1))
@settings(max_examples=60, deadline=None)
def test_lanes_agree(weights, rabi_dt, detune):
    lanes = backend_functions()
    results = [fn(weights, rabi_dt, detune) for fn in lanes.values()]
    np.testing.assert_allclose(results[0], results[1], atol=1e-12)


def test_backend_selection_reports_compiled_lane():
    assert KERNEL_BACKEND in ("c", "python")
    assert "python" in backend_functions()
