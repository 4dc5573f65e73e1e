"""Gate-to-pulse lowering.

Single-qubit rotations compile to the calibrated pi/2 template plus
virtual Z phase bookkeeping; a Z rotation is free and costs zero samples.
CX compiles to a cross-resonance half-turn with a corrective pi/2 on the
target. Ops are packed by frontier: a fragment starts at the latest busy
time over every qubit and channel it touches, and clean fragments stay on
the alignment grid because every template duration is a multiple of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pulseguard.core.calibration import CalibrationSnapshot
from pulseguard.core.channels import Channel, acquire, control, drive, measure
from pulseguard.core.errors import LoweringError
from pulseguard.core.gates import GateCircuit, GateOp
from pulseguard.core.instructions import Acquire, Play, ShiftPhase
from pulseguard.core.schedule import Schedule, ScheduleEntry
from pulseguard.lowering.binding import bind_schedule, check_mode, resolve_binding


@dataclass(frozen=True)
class _Fragment:
    schedule: Schedule
    qubits: frozenset[int]
    channels: frozenset[Channel]

    @property
    def duration(self) -> int:
        return self.schedule.duration


def _virtual_z(
    qubit: int, angle: float, calibration: CalibrationSnapshot, at: int
) -> list[ScheduleEntry]:
    """Z rotation by `angle`: retard the drive frame and every coupled
    control frame by the same amount so conditional axes stay aligned."""
    entries = [ScheduleEntry(at, ShiftPhase(drive(qubit), -angle))]
    for channel in calibration.incident_controls(qubit):
        entries.append(ScheduleEntry(at, ShiftPhase(channel, -angle)))
    return entries


def _single_qubit_sequence(
    qubit: int, steps: list, calibration: CalibrationSnapshot
) -> list[ScheduleEntry]:
    qc = calibration.qubit(qubit)
    entries: list[ScheduleEntry] = []
    t = 0
    for step in steps:
        if step[0] == "rz":
            entries.extend(_virtual_z(qubit, step[1], calibration, t))
        elif step[0] == "sx":
            entries.append(ScheduleEntry(t, Play(drive(qubit), qc.sx_template)))
            t += qc.sx_template.duration
        elif step[0] == "x":
            entries.append(ScheduleEntry(t, Play(drive(qubit), qc.x_template)))
            t += qc.x_template.duration
        else:
            raise LoweringError(f"unknown lowering step {step[0]!r}")
    return entries


def _u3_steps(theta: float, phi: float, lam: float) -> list:
    return [
        ("rz", lam),
        ("sx",),
        ("rz", theta - math.pi),
        ("sx",),
        ("rz", phi + math.pi),
    ]


def _native_entries(
    op: GateOp, calibration: CalibrationSnapshot
) -> list[ScheduleEntry]:
    name = op.name
    if name == "rz":
        return _virtual_z(op.qubits[0], op.params[0], calibration, 0)
    if name == "z":
        return _virtual_z(op.qubits[0], math.pi, calibration, 0)
    if name in ("x", "sx"):
        return _single_qubit_sequence(op.qubits[0], [(name,)], calibration)
    if name == "h":
        steps = [("rz", math.pi / 2), ("sx",), ("rz", math.pi / 2)]
        return _single_qubit_sequence(op.qubits[0], steps, calibration)
    if name == "rx":
        steps = _u3_steps(op.params[0], -math.pi / 2, math.pi / 2)
        return _single_qubit_sequence(op.qubits[0], steps, calibration)
    if name == "u3":
        steps = _u3_steps(*op.params)
        return _single_qubit_sequence(op.qubits[0], steps, calibration)
    if name == "measure":
        q = op.qubits[0]
        qc = calibration.qubit(q)
        return [
            ScheduleEntry(0, Play(measure(q), qc.measure_template)),
            ScheduleEntry(0, Acquire(q, qc.readout_duration, op.clbits[0])),
        ]
    if name == "cx":
        return _cx_entries(op.qubits[0], op.qubits[1], calibration)
    raise LoweringError(f"no lowering for gate {name!r}")


def _cx_entries(
    control_q: int, target_q: int, calibration: CalibrationSnapshot
) -> list[ScheduleEntry]:
    try:
        ordinal = calibration.pair_ordinal((control_q, target_q))
    except Exception:
        raise LoweringError(
            f"cx ({control_q}, {target_q}) needs a directed coupling the device lacks"
        ) from None
    entries = _virtual_z(control_q, -math.pi / 2, calibration, 0)
    cr_template = calibration.pair_calibration(ordinal).cr_template
    entries.append(ScheduleEntry(0, Play(control(ordinal), cr_template)))
    sx_template = calibration.qubit(target_q).sx_template
    inverted = sx_template.with_amp(-sx_template.amp)
    entries.append(ScheduleEntry(cr_template.duration, Play(drive(target_q), inverted)))
    return entries


def _entry_channels(entries: list[ScheduleEntry]) -> frozenset[Channel]:
    return frozenset(entry.channel for entry in entries)


def _fragment(
    op: GateOp, calibration: CalibrationSnapshot, mode: str
) -> _Fragment:
    if op.custom is not None:
        mapping = resolve_binding(op, calibration, mode)
        clbit_map = {j: op.clbits[j] for j in range(op.custom.num_clbits)}
        bound = bind_schedule(op.custom.schedule, mapping, clbit_map)
        qubits = set(op.qubits)
        for dest in mapping.values():
            qubits.update(calibration.channel_qubits(dest))
        return _Fragment(bound, frozenset(qubits), _entry_channels(list(bound)))
    entries = _native_entries(op, calibration)
    schedule = Schedule(tuple(entries))
    return _Fragment(schedule, frozenset(op.qubits), _entry_channels(entries))


def lower_gate(
    op: GateOp, calibration: CalibrationSnapshot, mode: str = "strict"
) -> Schedule:
    """Pulse fragment for a single op, starting at sample 0."""
    check_mode(mode)
    return _fragment(op, calibration, mode).schedule


def lower_circuit(
    circuit: GateCircuit, calibration: CalibrationSnapshot, mode: str = "strict"
) -> Schedule:
    """Compile a circuit to one device schedule."""
    check_mode(mode)
    if circuit.num_qubits > calibration.num_qubits:
        raise LoweringError(
            f"circuit uses {circuit.num_qubits} qubits but the device has "
            f"{calibration.num_qubits}"
        )
    qubit_frontier = [0] * calibration.num_qubits
    channel_frontier: dict[Channel, int] = {}
    entries: list[ScheduleEntry] = []
    for op in circuit.ops:
        fragment = _fragment(op, calibration, mode)
        start = 0
        for q in fragment.qubits:
            start = max(start, qubit_frontier[q])
        for ch in fragment.channels:
            start = max(start, channel_frontier.get(ch, 0))
        for entry in fragment.schedule.shifted(start):
            entries.append(entry)
        end = start + fragment.duration
        for q in fragment.qubits:
            qubit_frontier[q] = end
        for ch in fragment.channels:
            channel_frontier[ch] = end
    return Schedule(tuple(entries))
