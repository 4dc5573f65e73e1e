"""Pulse engine behavior: shots, density evolution, noise, misalignment."""

import math

import numpy as np
import pytest

from pulseguard.core import (
    Acquire,
    Delay,
    GateCircuit,
    GateOp,
    Play,
    Schedule,
    ScheduleEntry,
    SimulationError,
    X_MAT,
    drive,
    embed,
    fidelity,
    measure,
)
from pulseguard.lowering import lower_circuit
from pulseguard.sim import (
    SimOptions,
    amplitude_damping,
    idle_kraus,
    phase_damping,
    simulate_density,
    simulate_shots,
    simulate_unitary,
)


def lowered(ops, calibration, clbits=0):
    num_qubits = calibration.num_qubits
    return lower_circuit(GateCircuit(num_qubits, clbits, tuple(ops)), calibration)


def padded_delay(calibration, microseconds):
    samples = int(round(microseconds * 1e-6 / calibration.timing.dt / 16)) * 16
    return max(samples, 16)


def with_tail(schedule, entries):
    merged = list(schedule.entries) + list(entries)
    return Schedule(tuple(sorted(merged, key=lambda e: (e.start_time,))))


def test_x_then_measure_is_deterministic(cal1q):
    schedule = lowered(
        [GateOp("x", (0,)), GateOp("measure", (0,), clbits=(0,))], cal1q, clbits=1
    )
    result = simulate_shots(schedule, cal1q, SimOptions(shots=256, seed=3))
    assert result.counts == {"1": 256}
    assert result.probabilities["1"] == pytest.approx(1.0, abs=1e-9)


def test_counts_always_sum_to_shots(cal1q):
    schedule = lowered(
        [GateOp("h", (0,)), GateOp("measure", (0,), clbits=(0,))], cal1q, clbits=1
    )
    result = simulate_shots(schedule, cal1q, SimOptions(shots=999, seed=1))
    assert sum(result.counts.values()) == 999


def test_same_seed_reproduces_counts(cal1q):
    schedule = lowered(
        [GateOp("h", (0,)), GateOp("measure", (0,), clbits=(0,))], cal1q, clbits=1
    )
    a = simulate_shots(schedule, cal1q, SimOptions(shots=512, seed=42))
    b = simulate_shots(schedule, cal1q, SimOptions(shots=512, seed=42))
    assert a.counts == b.counts


def test_exact_probabilities_ignore_the_seed(cal2q):
    schedule = lowered(
        [
            GateOp("h", (0,)),
            GateOp("cx", (0, 1)),
            GateOp("measure", (0,), clbits=(0,)),
            GateOp("measure", (1,), clbits=(1,)),
        ],
        cal2q,
        clbits=2,
    )
    a = simulate_shots(schedule, cal2q, SimOptions(shots=16, seed=0))
    b = simulate_shots(schedule, cal2q, SimOptions(shots=16, seed=99))
    assert a.probabilities == b.probabilities
    assert a.probabilities["00"] == pytest.approx(0.5, abs=1e-9)
    assert a.probabilities["11"] == pytest.approx(0.5, abs=1e-9)


def test_density_matches_shot_probabilities(cal2q):
    ops = [GateOp("h", (0,)), GateOp("u3", (1,), (0.7, 0.1, -0.3))]
    measured = ops + [
        GateOp("measure", (0,), clbits=(0,)),
        GateOp("measure", (1,), clbits=(1,)),
    ]
    rho = simulate_density(lowered(ops, cal2q), cal2q)
    result = simulate_shots(lowered(measured, cal2q, clbits=2), cal2q)
    assert rho.probability_one(0) == pytest.approx(
        sum(p for b, p in result.probabilities.items() if b[-1] == "1"), abs=1e-9
    )
    assert rho.probability_one(1) == pytest.approx(
        sum(p for b, p in result.probabilities.items() if b[-2] == "1"), abs=1e-9
    )


def test_memory_slot_reuse_is_an_error(cal2q):
    # The circuit layer already rejects double-written clbits, so the
    # engine-level guard needs a hand-assembled schedule to trigger.
    t0 = cal2q.qubit(0).measure_template
    t1 = cal2q.qubit(1).measure_template
    schedule = Schedule.build(
        [
            (0, Play(measure(0), t0)),
            (0, Acquire(0, t0.duration, 0)),
            (480, Play(measure(1), t1)),
            (480, Acquire(1, t1.duration, 0)),
        ]
    )
    with pytest.raises(SimulationError):
        simulate_shots(schedule, cal2q, SimOptions(shots=4, seed=0))


def test_readout_play_requires_an_acquire(cal1q):
    template = cal1q.qubit(0).measure_template
    schedule = Schedule.build([(0, Play(measure(0), template))])
    with pytest.raises(SimulationError):
        simulate_shots(schedule, cal1q, SimOptions(shots=4, seed=0))


def test_overlapping_plays_are_an_error(cal1q):
    template = cal1q.qubit(0).x_template
    schedule = Schedule.build(
        [(0, Play(drive(0), template)), (80, Play(drive(0), template))]
    )
    with pytest.raises(SimulationError):
        simulate_density(schedule, cal1q)


def test_unitary_extraction_rejects_measurement(cal1q):
    schedule = lowered(
        [GateOp("measure", (0,), clbits=(0,))], cal1q, clbits=1
    )
    with pytest.raises(SimulationError):
        simulate_unitary(schedule, cal1q)


def test_unitary_extraction_rejects_noise(cal1q):
    schedule = lowered([GateOp("x", (0,))], cal1q)
    with pytest.raises(SimulationError):
        simulate_unitary(schedule, cal1q, SimOptions(noise=True))


def test_excited_state_relaxes_with_t1(cal1q):
    q = cal1q.qubit(0)
    duration = padded_delay(cal1q, q.t1)
    base = lowered([GateOp("x", (0,))], cal1q)
    schedule = with_tail(
        base, [ScheduleEntry(base.duration, Delay(drive(0), duration))]
    )
    rho = simulate_density(schedule, cal1q, SimOptions(noise=True))
    expected = math.exp(-duration * cal1q.timing.dt / (q.t1 * 1e-6))
    assert rho.probability_one(0) == pytest.approx(expected, abs=1e-6)


def test_ramsey_decay_follows_t2(cal1q):
    # H, idle t, H maps coherence loss onto population:
    # P(|1>) = (1 - exp(-t/T2)) / 2.
    q = cal1q.qubit(0)
    duration = padded_delay(cal1q, 0.5 * q.t2)
    first = lowered([GateOp("h", (0,))], cal1q)
    t0 = first.duration
    second = lowered([GateOp("h", (0,))], cal1q)
    entries = [ScheduleEntry(t0, Delay(drive(0), duration))]
    entries += [
        ScheduleEntry(t0 + duration + e.start_time, e.instruction)
        for e in second.entries
    ]
    schedule = with_tail(first, entries)
    rho = simulate_density(schedule, cal1q, SimOptions(noise=True))
    t = duration * cal1q.timing.dt
    expected = 0.5 * (1.0 - math.exp(-t / (q.t2 * 1e-6)))
    assert rho.probability_one(0) == pytest.approx(expected, abs=1e-6)


def test_noiseless_idle_preserves_the_state(cal1q):
    base = lowered([GateOp("x", (0,))], cal1q)
    schedule = with_tail(
        base, [ScheduleEntry(base.duration, Delay(drive(0), 160_000))]
    )
    rho = simulate_density(schedule, cal1q, SimOptions(noise=False))
    assert rho.probability_one(0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "kraus",
    [
        amplitude_damping(0.3),
        phase_damping(0.1),
        idle_kraus(5e-6, 100.0, 120.0),
    ],
    ids=["damping", "dephasing", "idle"],
)
def test_kraus_channels_are_trace_preserving(kraus):
    total = sum(k.conj().T @ k for k in kraus)
    np.testing.assert_allclose(total, np.eye(2), atol=1e-12)


def test_idle_kraus_skips_degenerate_durations():
    assert idle_kraus(0.0, 100.0, 100.0) is None
    assert idle_kraus(-1.0, 100.0, 100.0) is None


def test_substep_refinement_converges(cal1q):
    schedule = lowered([GateOp("u3", (0,), (0.9, 0.2, -1.3))], cal1q)
    coarse = simulate_unitary(schedule, cal1q, SimOptions(substep=1))
    fine = simulate_unitary(schedule, cal1q, SimOptions(substep=4))
    assert fidelity(coarse, fine) > 1 - 1e-9


def test_off_grid_play_slips_phase_only_when_modeled(cal1q):
    template = cal1q.qubit(0).x_template
    schedule = Schedule.build([(8, Play(drive(0), template))])
    target = embed(X_MAT, (0,), 1)
    clean = simulate_unitary(
        schedule, cal1q, SimOptions(misalignment_model=False)
    )
    slipped = simulate_unitary(
        schedule, cal1q, SimOptions(misalignment_model=True)
    )
    assert fidelity(clean, target) > 1 - 1e-9
    assert fidelity(slipped, target) < 1 - 1e-6


def test_aligned_play_is_immune_to_the_misalignment_model(cal1q):
    schedule = lowered([GateOp("x", (0,))], cal1q)
    on = simulate_unitary(schedule, cal1q, SimOptions(misalignment_model=True))
    off = simulate_unitary(schedule, cal1q, SimOptions(misalignment_model=False))
    assert fidelity(on, off) > 1 - 1e-12
