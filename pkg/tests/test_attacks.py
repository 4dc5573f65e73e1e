"""Tamper passes: reversibility, hash behavior, input validation."""

import math

import pytest

from pulseguard.core import (
    AttackError,
    GateCircuit,
    GateOp,
    SampledWaveform,
    Schedule,
    content_hash,
    control,
    decode,
    drive,
    encode,
    gate_level_hash,
    measure,
)
from pulseguard.attacks import (
    FLIP_KINDS,
    TamperRecord,
    build_flip_gadget,
    frequency_mismatch,
    phase_mismatch,
    qubit_block,
    qubit_plunder,
    qubit_reorder,
    timing_mismatch,
    waveform_mismatch,
)
from pulseguard.lowering import gate_from_circuit, lower_circuit


@pytest.fixture
def twin_circuit(cal2q):
    # One custom gate driving both qubits, giving two same-kind slots
    # (d0, d1) so reorder has something to permute.
    sub = GateCircuit(2, 0, (GateOp("x", (0,)), GateOp("x", (1,))))
    gate = gate_from_circuit("twin", sub, cal2q, qubits=(0, 1))
    return GateCircuit(2, 0, (GateOp("twin", (0, 1), custom=gate),))


@pytest.fixture
def pulse_schedule(cal2q):
    ops = (GateOp("h", (0,)), GateOp("cx", (0, 1)))
    return lower_circuit(GateCircuit(2, 0, ops), cal2q)


def test_plunder_is_reversible(twin_circuit):
    tampered, record = qubit_plunder(twin_circuit, 0, {drive(0): drive(1)})
    assert record.restore() == twin_circuit
    assert record.result() == tampered
    assert dict(tampered.ops[0].binding_override)[drive(0)] == drive(1)


def test_plunder_flags_destination_collisions(twin_circuit):
    _, record = qubit_plunder(
        twin_circuit, 0, {drive(0): drive(1), drive(1): drive(1)}
    )
    assert record.params["overlap_risk"] is True
    _, record = qubit_plunder(
        twin_circuit, 0, {drive(0): drive(1), drive(1): drive(0)}
    )
    assert record.params["overlap_risk"] is False


def test_circuit_passes_preserve_the_gate_level_hash(twin_circuit, cal2q):
    plundered, _ = qubit_plunder(twin_circuit, 0, {drive(0): drive(1)})
    blocked, _ = qubit_block(twin_circuit, 0, 160)
    reordered, _ = qubit_reorder(
        twin_circuit, 0, {drive(0): drive(1), drive(1): drive(0)}, cal2q
    )
    reference = gate_level_hash(twin_circuit)
    for variant in (plundered, blocked, reordered):
        assert gate_level_hash(variant) == reference
        assert content_hash(variant) != content_hash(twin_circuit)


def test_block_replaces_pulses_with_idle(twin_circuit):
    tampered, record = qubit_block(twin_circuit, 0, 320)
    schedule = tampered.ops[0].custom.schedule
    assert all(type(e.instruction).__name__ == "Delay" for e in schedule.entries)
    assert record.params["delay_duration"] == 320
    assert sorted(record.params["channels"]) == ["d0", "d1"]


def test_block_can_target_a_single_channel(twin_circuit):
    tampered, _ = qubit_block(twin_circuit, 0, 320, channels=(drive(1),))
    schedule = tampered.ops[0].custom.schedule
    kinds = {e.channel.label: type(e.instruction).__name__ for e in schedule.entries}
    assert kinds == {"d0": "Play", "d1": "Delay"}


def test_reorder_swaps_effective_destinations(twin_circuit, cal2q):
    tampered, _ = qubit_reorder(
        twin_circuit, 0, {drive(0): drive(1), drive(1): drive(0)}, cal2q
    )
    override = dict(tampered.ops[0].binding_override)
    assert override == {drive(0): drive(1), drive(1): drive(0)}


def test_schedule_passes_round_trip(pulse_schedule, cal2q):
    phase_entries = [
        i
        for i, e in enumerate(pulse_schedule.entries)
        if type(e.instruction).__name__ == "ShiftPhase"
    ]
    play_entries = [
        i
        for i, e in enumerate(pulse_schedule.entries)
        if type(e.instruction).__name__ == "Play"
    ]
    flat = SampledWaveform(tuple([0.1 + 0j] * 160))
    edits = [
        timing_mismatch(pulse_schedule, play_entries[0], 7),
        frequency_mismatch(pulse_schedule, drive(0), 4.0),
        phase_mismatch(pulse_schedule, phase_entries[0], 1.25),
        waveform_mismatch(pulse_schedule, play_entries[0], flat),
    ]
    for tampered, record in edits:
        assert record.restore() == pulse_schedule
        assert record.result() == tampered
        assert content_hash(tampered) != content_hash(pulse_schedule)


def test_frequency_pass_inserts_or_rewrites(pulse_schedule):
    tampered, record = frequency_mismatch(pulse_schedule, drive(1), 4.8)
    assert record.params["previous"] is None
    assert "inserted" in record.target
    again, record2 = frequency_mismatch(tampered, drive(1), 4.9)
    assert record2.params["previous"] == 4.8
    assert "inserted" not in record2.target


def test_phase_pass_keeps_instruction_flavor(pulse_schedule):
    index = next(
        i
        for i, e in enumerate(pulse_schedule.entries)
        if type(e.instruction).__name__ == "ShiftPhase"
    )
    tampered, _ = phase_mismatch(pulse_schedule, index, -0.5)
    edited = tampered.entries[index].instruction
    assert type(edited).__name__ == "ShiftPhase"
    assert edited.delta == -0.5


def test_record_serialization_round_trip(pulse_schedule):
    _, record = timing_mismatch(pulse_schedule, 0, 3)
    revived = decode(encode(record))
    assert revived == record
    assert revived.restore() == pulse_schedule


@pytest.mark.parametrize(
    "call",
    [
        lambda c, cal: qubit_plunder(c, 5, {drive(0): drive(1)}),
        lambda c, cal: qubit_plunder(c, 0, {}),
        lambda c, cal: qubit_plunder(c, 0, {drive(0): measure(1)}),
        lambda c, cal: qubit_block(c, 0, 0),
        lambda c, cal: qubit_block(c, 0, 160, channels=(control(0),)),
        lambda c, cal: qubit_reorder(c, 0, {}, cal),
        lambda c, cal: qubit_reorder(c, 0, {drive(0): drive(0)}, cal),
        lambda c, cal: qubit_reorder(c, 0, {drive(0): drive(1)}, cal),
        lambda c, cal: qubit_reorder(c, 0, {drive(0): control(0)}, cal),
        lambda c, cal: qubit_reorder(c, 0, {drive(0): drive(7)}, cal),
    ],
    ids=[
        "plunder-bad-index",
        "plunder-empty-remap",
        "plunder-kind-change",
        "block-zero-delay",
        "block-silent-channel",
        "reorder-empty",
        "reorder-identity",
        "reorder-not-bijection",
        "reorder-kind-change",
        "reorder-foreign-slot",
    ],
)
def test_circuit_pass_validation(twin_circuit, cal2q, call):
    with pytest.raises(AttackError):
        call(twin_circuit, cal2q)


def test_circuit_passes_refuse_native_gates(cal2q):
    circuit = GateCircuit(2, 0, (GateOp("x", (0,)),))
    with pytest.raises(AttackError):
        qubit_plunder(circuit, 0, {drive(0): drive(1)})


@pytest.mark.parametrize(
    "call",
    [
        lambda s: timing_mismatch(s, 0, 0),
        lambda s: timing_mismatch(s, 0, -10_000),
        lambda s: timing_mismatch(s, 10_000, 5),
        lambda s: frequency_mismatch(s, measure(0), 4.0),
        lambda s: frequency_mismatch(s, drive(0), 4.0, play_index=99),
        lambda s: phase_mismatch(s, 10_000, 0.5),
        lambda s: waveform_mismatch(s, 10_000, SampledWaveform((0.1 + 0j,))),
    ],
    ids=[
        "timing-zero",
        "timing-negative-start",
        "timing-bad-index",
        "frequency-silent-channel",
        "frequency-bad-play-index",
        "phase-bad-index",
        "waveform-bad-index",
    ],
)
def test_schedule_pass_validation(pulse_schedule, call):
    with pytest.raises(AttackError):
        call(pulse_schedule)


def test_phase_pass_needs_a_phase_instruction(pulse_schedule):
    index = next(
        i
        for i, e in enumerate(pulse_schedule.entries)
        if type(e.instruction).__name__ == "Play"
    )
    with pytest.raises(AttackError):
        phase_mismatch(pulse_schedule, index, 0.5)


def test_waveform_pass_needs_a_play(pulse_schedule):
    index = next(
        i
        for i, e in enumerate(pulse_schedule.entries)
        if type(e.instruction).__name__ == "ShiftPhase"
    )
    with pytest.raises(AttackError):
        waveform_mismatch(pulse_schedule, index, SampledWaveform((0.1 + 0j,)))


def test_flip_gadget_kinds_are_complete():
    assert FLIP_KINDS == (
        "plunder",
        "block",
        "reorder",
        "timing",
        "frequency",
        "phase",
        "waveform",
    )


@pytest.mark.parametrize("kind", FLIP_KINDS)
def test_flip_gadgets_arm_and_disarm(kind):
    from pulseguard.core import synthesize_snapshot

    calibration = synthesize_snapshot(2, coupling=((0, 1),), seed=5)
    clean, none_record = build_flip_gadget(calibration, kind, armed=False)
    assert none_record is None
    armed, record = build_flip_gadget(calibration, kind, armed=True)
    assert isinstance(record, TamperRecord)
    assert gate_level_hash(armed) == gate_level_hash(clean)


def test_flip_gadget_rejects_unknown_kind(cal2q):
    with pytest.raises(AttackError):
        build_flip_gadget(cal2q, "meltdown", armed=True)
