"""Synthetic device calibrations.

synthesize_snapshot builds a self-consistent backend: template amplitudes
are calibrated against the same propagator the simulator uses, so a clean
lowering reproduces ideal gates to roundoff. drift_snapshot ages one by a
random walk plus the vendor's amplitude rescale, which keeps pulse areas
(and therefore gate angles) invariant.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from pulseguard._kernels import su2_window
from pulseguard.core.calibration import (
    CalibrationSnapshot,
    PairCalibration,
    QubitCalibration,
    TimingConstraints,
)
from pulseguard.core.errors import CalibrationError
from pulseguard.core.waveforms import ParametricWaveform

MAX_QUBITS = 8

_X_DURATION = 160
_X_SIGMA = 40.0
_CR_DURATION = 368
_CR_SIGMA = 64.0
_CR_WIDTH = 240
_MEASURE_DURATION = 480
_MEASURE_SIGMA = 64.0
_MEASURE_WIDTH = 352
_BASE_TIMESTAMP = 1.75e9

# Vendor recalibration tolerances: carrier walks must stay well inside the
# 1e-3 GHz verification budget, so the walk is clipped at half of it.
_FREQ_CLIP = 5.0e-4


def _unit_envelope(template: ParametricWaveform) -> np.ndarray:
    return np.asarray(template.with_amp(1.0 + 0.0j).materialize(), dtype=np.complex128)


def _calibrated_x_amp(rabi_scale: float, dt: float, envelope: np.ndarray) -> float:
    """Amplitude driving a full flip, found on the simulator's own propagator."""
    area = float(np.sum(np.abs(envelope)))
    estimate = math.pi / (rabi_scale * dt * area)

    def deviation(amp: float) -> float:
        u = su2_window(amp * envelope, rabi_scale * dt, 0.0)
        return float(u[0, 0].real)

    return float(brentq(deviation, 0.5 * estimate, 1.5 * estimate, xtol=1e-15))


def _sample_frequencies(rng: np.random.Generator, count: int) -> list[float]:
    # Rejection keeps carriers >= 50 MHz apart so cross-talk stays addressable.
    accepted: list[float] = []
    for _ in range(count):
        for _attempt in range(10_000):
            f = float(rng.uniform(4.5, 5.5))
            if all(abs(f - g) >= 0.05 for g in accepted):
                accepted.append(f)
                break
        else:
            raise CalibrationError("could not place qubit frequencies 50 MHz apart")
    return accepted


def synthesize_snapshot(
    num_qubits: int,
    coupling: tuple[tuple[int, int], ...] = (),
    seed: int = 0,
    timestamp: float = _BASE_TIMESTAMP,
) -> CalibrationSnapshot:
    """Generate a calibrated device.

    Args:
        num_qubits: Device size, at most MAX_QUBITS.
        coupling: Directed (control, target) pairs; order fixes control
            channel ordinals.
        seed: RNG seed; equal seeds give equal snapshots.
        timestamp: Calibration epoch in seconds.
    """
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CalibrationError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
    rng = np.random.default_rng(seed)
    timing = TimingConstraints()
    dt = timing.dt

    frequencies = _sample_frequencies(rng, num_qubits)
    qubits = []
    for q in range(num_qubits):
        anharmonicity = float(rng.normal(-0.33, 0.01))
        t1 = float(rng.uniform(80.0, 150.0))
        t2 = min(t1 * float(rng.uniform(0.9, 1.8)), 2.0 * t1)
        amp_target = float(rng.uniform(0.2, 0.3))

        x_template = ParametricWaveform(
            "drag", _X_DURATION, 1.0 + 0.0j, sigma=_X_SIGMA, beta=0.0
        )
        envelope = _unit_envelope(x_template)
        area = float(np.sum(np.abs(envelope)))
        rabi_scale = math.pi / (amp_target * area * dt)
        amp_x = _calibrated_x_amp(rabi_scale, dt, envelope)

        measure_amp = float(rng.uniform(0.08, 0.12))
        qubits.append(
            QubitCalibration(
                frequency=frequencies[q],
                anharmonicity=anharmonicity,
                t1=t1,
                t2=t2,
                rabi_scale=rabi_scale,
                x_template=x_template.with_amp(amp_x + 0.0j),
                sx_template=x_template.with_amp(0.5 * amp_x + 0.0j),
                measure_template=ParametricWaveform(
                    "gaussian_square",
                    _MEASURE_DURATION,
                    measure_amp + 0.0j,
                    sigma=_MEASURE_SIGMA,
                    width=_MEASURE_WIDTH,
                ),
                readout_duration=_MEASURE_DURATION,
            )
        )

    pairs = []
    for control, target in coupling:
        if not (0 <= control < num_qubits and 0 <= target < num_qubits):
            raise CalibrationError(f"coupling pair ({control}, {target}) out of range")
        cr_template = ParametricWaveform(
            "gaussian_square",
            _CR_DURATION,
            1.0 + 0.0j,
            sigma=_CR_SIGMA,
            width=_CR_WIDTH,
        )
        cr_area = float(np.sum(np.abs(_unit_envelope(cr_template))))
        amp_u = float(rng.uniform(0.1, 0.2))
        # The echo-free half-turn is linear in pulse area, so the coupling
        # rate solves exactly.
        cr_scale = (0.5 * math.pi) / (amp_u * cr_area * dt)
        pairs.append(
            PairCalibration(
                pair=(control, target),
                frequency=frequencies[target],
                cr_scale=cr_scale,
                cr_template=cr_template.with_amp(amp_u + 0.0j),
            )
        )

    return CalibrationSnapshot(
        timestamp=float(timestamp),
        timing=timing,
        qubits=tuple(qubits),
        pairs=tuple(pairs),
    )


def drift_snapshot(
    snapshot: CalibrationSnapshot,
    hours: float,
    seed: int = 0,
    frequency_sigma: float = 2.0e-5,
) -> CalibrationSnapshot:
    """Age a calibration by a drift-plus-recalibration cycle.

    Carrier frequencies take a clipped random walk (sigma in GHz per
    sqrt-hour), relaxation times and coupling rates wander a few percent,
    and the vendor rescales every template amplitude so the calibrated
    rotation angles are preserved exactly.
    """
    if hours < 0:
        raise CalibrationError(f"hours must be nonnegative, got {hours}")
    rng = np.random.default_rng(seed)
    root_h = math.sqrt(hours)
    scale_sigma = 0.01 * math.sqrt(hours / 24.0)

    qubits = []
    for old in snapshot.qubits:
        df = float(np.clip(rng.normal(0.0, frequency_sigma * root_h), -_FREQ_CLIP, _FREQ_CLIP))
        relax = max(0.5, 1.0 + 1.0e-1 * math.sqrt(hours / 24.0) * float(rng.normal()))
        t1 = old.t1 * relax
        t2 = min(old.t2 * relax, 2.0 * t1)
        rabi_scale = old.rabi_scale * math.exp(scale_sigma * float(rng.normal()))
        rescale = old.rabi_scale / rabi_scale
        measure_walk = math.exp(0.5 * scale_sigma * float(rng.normal()))
        qubits.append(
            QubitCalibration(
                frequency=old.frequency + df,
                anharmonicity=old.anharmonicity,
                t1=t1,
                t2=t2,
                rabi_scale=rabi_scale,
                x_template=old.x_template.with_amp(old.x_template.amp * rescale),
                sx_template=old.sx_template.with_amp(old.sx_template.amp * rescale),
                measure_template=old.measure_template.with_amp(
                    old.measure_template.amp * measure_walk
                ),
                readout_duration=old.readout_duration,
            )
        )

    pairs = []
    for old in snapshot.pairs:
        cr_scale = old.cr_scale * math.exp(scale_sigma * float(rng.normal()))
        rescale = old.cr_scale / cr_scale
        pairs.append(
            PairCalibration(
                pair=old.pair,
                frequency=qubits[old.pair[1]].frequency,
                cr_scale=cr_scale,
                cr_template=old.cr_template.with_amp(old.cr_template.amp * rescale),
            )
        )

    return CalibrationSnapshot(
        timestamp=snapshot.timestamp + 3600.0 * hours,
        timing=snapshot.timing,
        qubits=tuple(qubits),
        pairs=tuple(pairs),
        forbidden_band=snapshot.forbidden_band,
    )
