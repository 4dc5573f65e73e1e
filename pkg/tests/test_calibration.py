"""Synthetic devices: self-consistency, channel topology, drift model."""

import math

import numpy as np
import pytest

from pulseguard._kernels import su2_window
from pulseguard.core import (
    CalibrationError,
    acquire,
    content_hash,
    control,
    drift_snapshot,
    drive,
    measure,
    synthesize_snapshot,
    waveform_area,
)


def test_equal_seeds_give_identical_snapshots():
    a = synthesize_snapshot(3, coupling=((0, 1),), seed=42)
    b = synthesize_snapshot(3, coupling=((0, 1),), seed=42)
    assert a == b
    assert content_hash(a) == content_hash(b)
    assert a != synthesize_snapshot(3, coupling=((0, 1),), seed=43)


@pytest.mark.parametrize("bad", [0, 9])
def test_size_limits_enforced(bad):
    with pytest.raises(CalibrationError):
        synthesize_snapshot(bad)


def test_coupling_must_stay_on_device():
    with pytest.raises(CalibrationError):
        synthesize_snapshot(2, coupling=((0, 5),))


def test_template_durations_fit_the_grid(cal2q):
    g = cal2q.timing.granularity
    for q in range(cal2q.num_qubits):
        qc = cal2q.qubit(q)
        assert qc.x_template.duration % g == 0
        assert qc.sx_template.duration % g == 0
        assert qc.measure_template.duration % g == 0
    assert cal2q.pair_calibration(0).cr_template.duration % g == 0


def test_x_template_drives_a_full_flip(cal1q):
    # The amplitude is solved against the same propagator the simulator
    # folds, so the calibrated pulse must land on X to roundoff.
    qc = cal1q.qubit(0)
    envelope = np.asarray(qc.x_template.materialize())
    u = su2_window(envelope, qc.rabi_scale * cal1q.dt, 0.0)
    assert abs(u[0, 0]) < 1e-9
    assert abs(u[1, 0]) == pytest.approx(1.0, abs=1e-9)


def test_sx_template_is_half_the_x_amplitude(cal1q):
    qc = cal1q.qubit(0)
    assert qc.sx_template.amp == qc.x_template.amp / 2


def test_channel_topology(cal2q):
    assert cal2q.channel_qubits(drive(1)) == (1,)
    assert cal2q.channel_qubits(measure(0)) == (0,)
    assert cal2q.channel_qubits(control(0)) == (0, 1)
    assert cal2q.pair_ordinal((0, 1)) == 0
    with pytest.raises(CalibrationError):
        cal2q.pair_ordinal((1, 0))


def test_incident_controls_cover_both_pair_members(cal2q):
    # Virtual-Z bookkeeping must reach every control line whose pulse
    # addresses the qubit, whichever side of the pair it sits on.
    assert control(0) in cal2q.incident_controls(0)
    assert control(0) in cal2q.incident_controls(1)


def test_channel_frequencies(cal2q):
    assert cal2q.channel_frequency(drive(0)) == cal2q.qubit(0).frequency
    # Control channels drive at the target qubit's frequency.
    assert cal2q.channel_frequency(control(0)) == cal2q.qubit(1).frequency
    with pytest.raises(CalibrationError):
        cal2q.channel_frequency(acquire(0))


def test_forbidden_band_boundaries(cal2q):
    low, high = cal2q.forbidden_band
    assert cal2q.in_forbidden_band((low + high) / 2)
    assert not cal2q.in_forbidden_band(low - 1e-9)
    assert not cal2q.in_forbidden_band(high + 1e-9)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_drift_keeps_carriers_inside_the_verification_budget(cal2q, seed):
    aged = drift_snapshot(cal2q, hours=72.0, seed=seed)
    for q in range(2):
        walk = abs(aged.qubit(q).frequency - cal2q.qubit(q).frequency)
        assert walk <= 5.0e-4 + 1e-15
    assert aged.timestamp == cal2q.timestamp + 72.0 * 3600.0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_vendor_rescale_preserves_rotation_angles(cal2q, seed):
    # rabi_scale wanders but amp is rescaled in lockstep: the product, and
    # with it every calibrated gate angle, is exactly invariant.
    aged = drift_snapshot(cal2q, hours=72.0, seed=seed)
    for q in range(2):
        old, new = cal2q.qubit(q), aged.qubit(q)
        assert old.rabi_scale * waveform_area(old.x_template) == pytest.approx(
            new.rabi_scale * waveform_area(new.x_template), rel=1e-12
        )
    old_pair, new_pair = cal2q.pair_calibration(0), aged.pair_calibration(0)
    assert old_pair.cr_scale * waveform_area(old_pair.cr_template) == pytest.approx(
        new_pair.cr_scale * waveform_area(new_pair.cr_template), rel=1e-12
    )


def test_drift_of_zero_hours_is_calm(cal2q):
    aged = drift_snapshot(cal2q, hours=0.0, seed=9)
    assert aged.qubit(0).frequency == cal2q.qubit(0).frequency
    with pytest.raises(CalibrationError):
        drift_snapshot(cal2q, hours=-1.0)


def test_dt_is_subnanosecond(cal1q):
    assert 0 < cal1q.dt < 1e-9


def test_num_qubits_property(cal3q):
    assert cal3q.num_qubits == 3
