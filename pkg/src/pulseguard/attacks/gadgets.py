"""Flip gadgets: one minimal demo circuit per tamper kind.

Each gadget is a custom gate whose honest form leaves the probe qubit in
|0> (measured P(1) ~ 0) and whose armed form flips it, decays it, or
scrambles it, so a single number separates clean from tampered runs.
Every armed variant goes through the corresponding tamper pass, never a
hand-edited artifact, and all of them leave the gate-level content hash
unchanged; they are visible only below the circuit abstraction.

Gadgets are built against qubit 0's calibrated templates and expect a
device with at least 2 qubits (the plunder arm needs somewhere foreign
to land). The demo circuits measure qubit 0 into classical bit 0.
"""

from __future__ import annotations

import math
from dataclasses import replace

from pulseguard.attacks.passes import (
    frequency_mismatch,
    phase_mismatch,
    qubit_block,
    qubit_plunder,
    qubit_reorder,
    timing_mismatch,
    waveform_mismatch,
)
from pulseguard.attacks.records import TamperRecord
from pulseguard.core import (
    AttackError,
    CalibrationSnapshot,
    CustomGate,
    GateCircuit,
    GateOp,
    Play,
    Schedule,
    SetFrequency,
    ShiftPhase,
)
from pulseguard.core.channels import drive
from pulseguard.core.matrices import X_MAT, embed
from pulseguard.lowering import gate_from_circuit

__all__ = ["FLIP_KINDS", "build_flip_gadget"]

FLIP_KINDS = (
    "plunder",
    "block",
    "reorder",
    "timing",
    "frequency",
    "phase",
    "waveform",
)

# Mid-band carrier inside the hardware's rejected [2, 3] GHz window.
_BLOCKED_CARRIER_GHZ = 2.5

_IDENTITY = ((1, 0), (0, 1))
_FLIP = ((0, 1), (1, 0))


def _measure_op() -> GateOp:
    return GateOp("measure", (0,), clbits=(0,))


def _gate_op(gate: CustomGate, qubits: tuple[int, ...], override=()) -> GateOp:
    return GateOp(
        gate.name, qubits, custom=gate, binding_override=override
    )


def _swap_gate_schedule(
    circuit: GateCircuit, gate_index: int, schedule: Schedule
) -> GateCircuit:
    op = circuit.ops[gate_index]
    new_gate = replace(op.custom, schedule=schedule)
    ops = list(circuit.ops)
    ops[gate_index] = replace(op, custom=new_gate)
    return circuit.with_ops(ops)


def _build_plunder(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    # Two X pulses cancel while both route to the probe qubit; the second
    # rides on the undeclared slot d1, which is the plunder handle.
    x = calibration.qubit(0).x_template
    gate = CustomGate(
        "plunder_probe",
        num_qubits=1,
        schedule=Schedule.build(
            [(0, Play(drive(0), x)), (x.duration, Play(drive(1), x))]
        ),
        declared_unitary=_IDENTITY,
    )
    op = _gate_op(gate, (0,), {drive(0): drive(0), drive(1): drive(0)})
    return GateCircuit(2, 1, (op, _measure_op())), 0


def _build_block(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    # x then the gadget's X returns the qubit to |0>; suppressing the
    # gadget leaves it excited and decaying for the blocked window.
    x = calibration.qubit(0).x_template
    gate = CustomGate(
        "block_probe",
        num_qubits=1,
        schedule=Schedule.build([(0, Play(drive(0), x))]),
        declared_unitary=_FLIP,
    )
    ops = (GateOp("x", (0,)), _gate_op(gate, (0,)), _measure_op())
    return GateCircuit(2, 1, ops), 1


def _build_reorder(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    # Slot d1 carries a silent placeholder with a distinct duration, so
    # swapping d0 and d1 parks the X on the spectator qubit.
    x = calibration.qubit(0).x_template
    placeholder = replace(x, amp=0j, duration=80)
    gate = CustomGate(
        "reorder_probe",
        num_qubits=2,
        schedule=Schedule.build(
            [(0, Play(drive(0), x)), (0, Play(drive(1), placeholder))]
        ),
        declared_unitary=embed(X_MAT, (0,), 2),
    )
    ops = (GateOp("x", (0,)), _gate_op(gate, (0, 1)), _measure_op())
    return GateCircuit(2, 1, ops), 1


def _build_timing(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    x = calibration.qubit(0).x_template
    gate = CustomGate(
        "timing_probe",
        num_qubits=1,
        schedule=Schedule.build(
            [(0, Play(drive(0), x)), (x.duration, Play(drive(0), x))]
        ),
        declared_unitary=_IDENTITY,
    )
    return GateCircuit(2, 1, (_gate_op(gate, (0,)), _measure_op())), 0


def _build_frequency(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    # The retunes are no-ops at the calibrated frequency; rewriting the
    # first one drops the second X into the rejected band.
    qc = calibration.qubit(0)
    x = qc.x_template
    gate = CustomGate(
        "frequency_probe",
        num_qubits=1,
        schedule=Schedule.build(
            [
                (0, Play(drive(0), x)),
                (x.duration, SetFrequency(drive(0), qc.frequency)),
                (x.duration, Play(drive(0), x)),
                (2 * x.duration, SetFrequency(drive(0), qc.frequency)),
            ]
        ),
        declared_unitary=_IDENTITY,
    )
    return GateCircuit(2, 1, (_gate_op(gate, (0,)), _measure_op())), 0


def _build_phase(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    # h rz(0) h is the identity; the rz exists purely to plant a
    # zero-angle phase shift between the two sx envelopes.
    sub = GateCircuit(
        1,
        0,
        (
            GateOp("h", (0,)),
            GateOp("rz", (0,), (0.0,)),
            GateOp("h", (0,)),
        ),
    )
    gate = gate_from_circuit(
        "phase_probe", sub, calibration, qubits=(0,), declared_unitary=_IDENTITY
    )
    return GateCircuit(2, 1, (_gate_op(gate, (0,)), _measure_op())), 0


def _build_waveform(calibration: CalibrationSnapshot) -> tuple[GateCircuit, int]:
    x = calibration.qubit(0).x_template
    gate = CustomGate(
        "waveform_probe",
        num_qubits=1,
        schedule=Schedule.build([(0, Play(drive(0), replace(x, amp=0j)))]),
        declared_unitary=_IDENTITY,
    )
    return GateCircuit(2, 1, (_gate_op(gate, (0,)), _measure_op())), 0


_BUILDERS = {
    "plunder": _build_plunder,
    "block": _build_block,
    "reorder": _build_reorder,
    "timing": _build_timing,
    "frequency": _build_frequency,
    "phase": _build_phase,
    "waveform": _build_waveform,
}


def _zero_phase_entry(schedule: Schedule) -> int:
    for i, entry in enumerate(schedule.entries):
        if isinstance(entry.instruction, ShiftPhase) and entry.instruction.delta == 0.0:
            return i
    raise AttackError("gadget schedule lost its zero-angle phase shift")


def build_flip_gadget(
    calibration: CalibrationSnapshot,
    kind: str,
    armed: bool,
    *,
    delay_duration: int | None = None,
    timing_offset: int = 5,
) -> tuple[GateCircuit, TamperRecord | None]:
    """Demo circuit for one tamper kind, honest or armed.

    Args:
        calibration: device snapshot with >= 2 qubits.
        kind: one of FLIP_KINDS.
        armed: apply the kind's tamper pass to the honest circuit.
        delay_duration: armed block only; samples to hold the qubit idle.
            Defaults to one T1 of qubit 0.
        timing_offset: armed timing only; samples to slide the second X.

    Returns:
        (circuit, record): the demo circuit and, when armed, the tamper
        record. Circuit-level arms record the whole circuit; pulse-level
        arms record the gadget's template schedule.
    """
    if kind not in _BUILDERS:
        raise AttackError(f"unknown gadget kind {kind!r}; expected one of {FLIP_KINDS}")
    if calibration.num_qubits < 2:
        raise AttackError("flip gadgets need a device with at least 2 qubits")
    circuit, gate_index = _BUILDERS[kind](calibration)
    if not armed:
        return circuit, None

    if kind == "plunder":
        return qubit_plunder(circuit, gate_index, {drive(1): drive(1)})
    if kind == "block":
        if delay_duration is None:
            qc = calibration.qubit(0)
            delay_duration = int(round(qc.t1 * 1e-6 / calibration.dt))
        return qubit_block(circuit, gate_index, delay_duration)
    if kind == "reorder":
        return qubit_reorder(
            circuit, gate_index, {drive(0): drive(1), drive(1): drive(0)}
        )

    template = circuit.ops[gate_index].custom.schedule
    if kind == "timing":
        tampered, record = timing_mismatch(template, 1, timing_offset)
    elif kind == "frequency":
        tampered, record = frequency_mismatch(
            template, drive(0), _BLOCKED_CARRIER_GHZ, play_index=1
        )
    elif kind == "phase":
        tampered, record = phase_mismatch(
            template, _zero_phase_entry(template), -math.pi
        )
    else:
        full = calibration.qubit(0).x_template
        tampered, record = waveform_mismatch(template, 0, full)
    return _swap_gate_schedule(circuit, gate_index, tampered), record
