"""Tamper passes: targeted edits to circuits and schedules.

Each pass models one thing a compromised toolchain component could do
between compilation and execution. Circuit passes retarget a custom
gate's channel binding without touching its schedule, so the gate-level
content hash is preserved; schedule passes rewrite one instruction in
a lowered program. Every pass returns the edited artifact together with
a `TamperRecord` that can undo it.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Sequence

from pulseguard.core import (
    AttackError,
    BindingError,
    CalibrationSnapshot,
    Channel,
    Delay,
    GateCircuit,
    GateOp,
    Play,
    Schedule,
    ScheduleEntry,
    SetFrequency,
    SetPhase,
    ShiftPhase,
    Waveform,
)
from pulseguard.lowering.binding import default_target
from pulseguard.attacks.records import TamperRecord, snapshot

__all__ = [
    "frequency_mismatch",
    "phase_mismatch",
    "qubit_block",
    "qubit_plunder",
    "qubit_reorder",
    "timing_mismatch",
    "waveform_mismatch",
]


def _custom_op(circuit: GateCircuit, gate_index: int) -> GateOp:
    if not 0 <= gate_index < len(circuit.ops):
        raise AttackError(
            f"circuit has {len(circuit.ops)} ops, no index {gate_index}"
        )
    op = circuit.ops[gate_index]
    if not op.is_custom:
        raise AttackError(
            f"op {gate_index} is the native gate {op.name!r}; channel attacks "
            "apply to custom gates"
        )
    return op


def _swap_op(circuit: GateCircuit, gate_index: int, new_op: GateOp) -> GateCircuit:
    ops = list(circuit.ops)
    ops[gate_index] = new_op
    return circuit.with_ops(ops)


def _entry_at(schedule: Schedule, entry_index: int) -> ScheduleEntry:
    if not 0 <= entry_index < len(schedule.entries):
        raise AttackError(
            f"schedule has {len(schedule.entries)} entries, no index {entry_index}"
        )
    return schedule.entries[entry_index]


def _circuit_record(
    kind: str,
    circuit: GateCircuit,
    tampered: GateCircuit,
    gate_index: int,
    op_name: str,
    params: dict,
) -> TamperRecord:
    return TamperRecord(
        kind=kind,
        target=f"op {gate_index} ({op_name})",
        before=snapshot(circuit),
        after=snapshot(tampered),
        params=params,
    )


def qubit_plunder(
    circuit: GateCircuit,
    gate_index: int,
    channel_remap: Mapping[Channel, Channel],
) -> tuple[GateCircuit, TamperRecord]:
    """Redirect template slots of a custom gate onto other device channels.

    The remap merges into the op's binding override, so pulses written for
    the gate's declared qubits land on channels of the attacker's choosing.
    Kinds must match (a drive slot stays a drive channel); destination
    qubits are unconstrained, which is the point.
    """
    op = _custom_op(circuit, gate_index)
    remap = dict(channel_remap)
    if not remap:
        raise AttackError("channel remap must name at least one slot")
    for slot, dest in remap.items():
        if slot.kind != dest.kind:
            raise AttackError(
                f"remapping {slot.label} to {dest.label} changes the channel "
                "kind; the binder would reject it outright"
            )
    merged = dict(op.binding_override)
    merged.update(remap)
    destinations = list(merged.values())
    new_op = replace(op, binding_override=merged)
    tampered = _swap_op(circuit, gate_index, new_op)
    record = _circuit_record(
        "qubit_plunder",
        circuit,
        tampered,
        gate_index,
        op.name,
        {
            "remap": {slot.label: dest.label for slot, dest in sorted(
                remap.items(), key=lambda p: p[0].sort_key()
            )},
            "overlap_risk": len(set(destinations)) < len(destinations),
        },
    )
    return tampered, record


def qubit_block(
    circuit: GateCircuit,
    gate_index: int,
    delay_duration: int,
    channels: Sequence[Channel] | None = None,
) -> tuple[GateCircuit, TamperRecord]:
    """Suppress a custom gate's pulses, holding the channels idle instead.

    Every entry on the targeted template channels is dropped and replaced
    by a single Delay starting at 0, so the qubit sits unmodulated (and,
    on hardware, decohering) for `delay_duration` samples. Defaults to all
    channels the gate actually drives.
    """
    op = _custom_op(circuit, gate_index)
    gate = op.custom
    if delay_duration <= 0:
        raise AttackError(f"delay must be positive, got {delay_duration}")
    present = gate.schedule.channels
    if channels is None:
        blocked = tuple(sorted(present, key=Channel.sort_key))
    else:
        blocked = tuple(channels)
        missing = [ch.label for ch in blocked if ch not in present]
        if missing:
            raise AttackError(
                f"gate schedule has nothing on {', '.join(missing)}"
            )
    if not blocked:
        raise AttackError("gate schedule is already empty; nothing to block")
    kept = [e for e in gate.schedule if e.channel not in blocked]
    stubs = [
        ScheduleEntry(0, Delay(ch, delay_duration))
        for ch in blocked
        if ch.kind != "acquire"
    ]
    new_gate = replace(gate, schedule=Schedule(tuple(kept + stubs)))
    new_op = replace(op, custom=new_gate)
    tampered = _swap_op(circuit, gate_index, new_op)
    record = _circuit_record(
        "qubit_block",
        circuit,
        tampered,
        gate_index,
        op.name,
        {
            "channels": [ch.label for ch in blocked],
            "delay_duration": delay_duration,
        },
    )
    return tampered, record


def qubit_reorder(
    circuit: GateCircuit,
    gate_index: int,
    permutation: Mapping[Channel, Channel],
    calibration: CalibrationSnapshot | None = None,
) -> tuple[GateCircuit, TamperRecord]:
    """Permute which device channels a custom gate's slots bind to.

    `permutation[a] = b` routes slot a's pulses to wherever slot b was
    going (override if present, default binding otherwise). Must be a
    kind-preserving bijection that moves at least one slot. Resolving a
    control slot's default needs the calibration's coupling map.
    """
    op = _custom_op(circuit, gate_index)
    gate = op.custom
    perm = dict(permutation)
    if not perm:
        raise AttackError("permutation must name at least one slot")
    slots = gate.template_slots()
    for a, b in perm.items():
        if a not in slots or b not in slots:
            raise AttackError(
                f"{a.label} -> {b.label} is outside the gate's template slots"
            )
        if a.kind != b.kind:
            raise AttackError(
                f"{a.label} -> {b.label} does not preserve the channel kind"
            )
    if set(perm) != set(perm.values()):
        raise AttackError("permutation must be a bijection on its slots")
    if all(a == b for a, b in perm.items()):
        raise AttackError("identity permutation moves nothing")

    existing = dict(op.binding_override)

    def effective(slot: Channel) -> Channel:
        if slot in existing:
            return existing[slot]
        try:
            return default_target(slot, gate, op.qubits, calibration)
        except BindingError as exc:
            raise AttackError(str(exc)) from None

    new_override = dict(existing)
    for slot, source in perm.items():
        new_override[slot] = effective(source)
    new_op = replace(op, binding_override=new_override)
    tampered = _swap_op(circuit, gate_index, new_op)
    record = _circuit_record(
        "qubit_reorder",
        circuit,
        tampered,
        gate_index,
        op.name,
        {
            "permutation": {a.label: b.label for a, b in sorted(
                perm.items(), key=lambda p: p[0].sort_key()
            )},
        },
    )
    return tampered, record


def timing_mismatch(
    schedule: Schedule, entry_index: int, offset: int
) -> tuple[Schedule, TamperRecord]:
    """Slide one entry in time by `offset` samples.

    Any nonzero offset desynchronizes the entry from the pulses around it;
    an offset that leaves the start off the alignment grid additionally
    corrupts the carrier phase at every boundary the pulse crosses.
    """
    entry = _entry_at(schedule, entry_index)
    if offset == 0:
        raise AttackError("offset of 0 changes nothing")
    new_start = entry.start_time + offset
    if new_start < 0:
        raise AttackError(f"shift would move the entry to t={new_start}")
    entries = list(schedule.entries)
    entries[entry_index] = ScheduleEntry(new_start, entry.instruction)
    tampered = Schedule(tuple(entries))
    record = TamperRecord(
        kind="timing_mismatch",
        target=f"{entry.channel.label} entry {entry_index} at t={entry.start_time}",
        before=snapshot(schedule),
        after=snapshot(tampered),
        params={"offset": offset, "new_start": new_start},
    )
    return tampered, record


def frequency_mismatch(
    schedule: Schedule,
    channel: Channel,
    new_frequency: float,
    play_index: int | None = None,
) -> tuple[Schedule, TamperRecord]:
    """Retune the carrier a pulse rides on.

    Targets the `play_index`-th pulse on `channel` (first by default):
    the SetFrequency in effect at that pulse is rewritten to
    `new_frequency` GHz, or one is inserted at the pulse's start when the
    channel was running at its calibrated default.
    """
    plays = [
        (i, e)
        for i, e in enumerate(schedule.entries)
        if e.channel == channel and isinstance(e.instruction, Play)
    ]
    if not plays:
        raise AttackError(f"no pulses on {channel.label}")
    which = 0 if play_index is None else play_index
    if not 0 <= which < len(plays):
        raise AttackError(
            f"{channel.label} carries {len(plays)} pulse(s), no index {which}"
        )
    _, play_entry = plays[which]
    entries = list(schedule.entries)
    in_effect = [
        (i, e)
        for i, e in enumerate(entries)
        if e.channel == channel
        and isinstance(e.instruction, SetFrequency)
        and e.start_time <= play_entry.start_time
    ]
    if in_effect:
        i, e = in_effect[-1]
        entries[i] = ScheduleEntry(e.start_time, SetFrequency(channel, new_frequency))
        target = f"{channel.label} set_frequency at t={e.start_time}"
        old = e.instruction.frequency
    else:
        entries.append(
            ScheduleEntry(play_entry.start_time, SetFrequency(channel, new_frequency))
        )
        target = f"{channel.label} inserted set_frequency at t={play_entry.start_time}"
        old = None
    tampered = Schedule(tuple(entries))
    record = TamperRecord(
        kind="frequency_mismatch",
        target=target,
        before=snapshot(schedule),
        after=snapshot(tampered),
        params={
            "frequency": new_frequency,
            "previous": old,
            "play_start": play_entry.start_time,
        },
    )
    return tampered, record


def phase_mismatch(
    schedule: Schedule, entry_index: int, new_phase: float
) -> tuple[Schedule, TamperRecord]:
    """Rewrite the angle of one phase instruction.

    Virtual-Z rotations live entirely in these angles, so a single edited
    ShiftPhase silently substitutes a different rotation while every pulse
    envelope stays byte-identical.
    """
    entry = _entry_at(schedule, entry_index)
    inst = entry.instruction
    if isinstance(inst, SetPhase):
        old = inst.phase
        new_inst: SetPhase | ShiftPhase = SetPhase(inst.channel, new_phase)
    elif isinstance(inst, ShiftPhase):
        old = inst.delta
        new_inst = ShiftPhase(inst.channel, new_phase)
    else:
        raise AttackError(
            f"entry {entry_index} is a {type(inst).__name__}, not a phase instruction"
        )
    entries = list(schedule.entries)
    entries[entry_index] = ScheduleEntry(entry.start_time, new_inst)
    tampered = Schedule(tuple(entries))
    record = TamperRecord(
        kind="phase_mismatch",
        target=f"{entry.channel.label} entry {entry_index} at t={entry.start_time}",
        before=snapshot(schedule),
        after=snapshot(tampered),
        params={"phase": new_phase, "previous": old},
    )
    return tampered, record


def waveform_mismatch(
    schedule: Schedule, entry_index: int, new_waveform: Waveform
) -> tuple[Schedule, TamperRecord]:
    """Swap the envelope of one pulse, duration changes included."""
    entry = _entry_at(schedule, entry_index)
    inst = entry.instruction
    if not isinstance(inst, Play):
        raise AttackError(
            f"entry {entry_index} is a {type(inst).__name__}, not a pulse"
        )
    entries = list(schedule.entries)
    entries[entry_index] = ScheduleEntry(
        entry.start_time, Play(inst.channel, new_waveform)
    )
    tampered = Schedule(tuple(entries))
    record = TamperRecord(
        kind="waveform_mismatch",
        target=f"{entry.channel.label} entry {entry_index} at t={entry.start_time}",
        before=snapshot(schedule),
        after=snapshot(tampered),
        params={
            "duration": new_waveform.duration,
            "previous_duration": inst.waveform.duration,
        },
    )
    return tampered, record
