"""Channel binding for custom gates.

A custom gate's schedule is written over template channels: drive(j) for
template qubit j, control(o) for the gate's o-th declared pair. Binding
rewrites those onto device channels for the qubits an op names. An op may
carry a binding override; strict lowering only accepts overrides that
restate the default binding, permissive lowering accepts any same-kind
destination (that freedom is exactly what the channel verifier audits).
"""

from __future__ import annotations

from pulseguard.core.calibration import CalibrationSnapshot
from pulseguard.core.channels import Channel, acquire, control, drive, measure
from pulseguard.core.errors import BindingError
from pulseguard.core.gates import CustomGate, GateOp
from pulseguard.core.instructions import Acquire
from pulseguard.core.schedule import Schedule, ScheduleEntry

MODES = ("strict", "permissive")


def check_mode(mode: str) -> None:
    if mode not in MODES:
        raise BindingError(f"mode must be one of {MODES}, got {mode!r}")


def template_channels(gate: CustomGate) -> set[Channel]:
    """Channels a schedule may use given the gate's declaration."""
    slots: set[Channel] = set()
    for j in range(gate.num_qubits):
        slots.add(drive(j))
        slots.add(measure(j))
        slots.add(acquire(j))
    for o in range(len(gate.pairs)):
        slots.add(control(o))
    return slots


def used_channels(schedule: Schedule) -> set[Channel]:
    return {entry.channel for entry in schedule}


def default_target(
    slot: Channel,
    gate: CustomGate,
    qubits: tuple[int, ...],
    calibration: CalibrationSnapshot | None,
) -> Channel:
    """Device channel a template slot binds to absent any override."""
    if slot.kind == "control":
        if calibration is None:
            raise BindingError(
                f"resolving control slot {slot.label} requires a calibration"
            )
        template_pair = gate.pairs[slot.index]
        device_pair = (qubits[template_pair[0]], qubits[template_pair[1]])
        try:
            ordinal = calibration.pair_ordinal(device_pair)
        except Exception:
            raise BindingError(
                f"device has no directed coupling {device_pair} for slot {slot.label}"
            ) from None
        return control(ordinal)
    return Channel(slot.kind, qubits[slot.index])


def resolve_binding(
    op: GateOp, calibration: CalibrationSnapshot, mode: str = "strict"
) -> dict[Channel, Channel]:
    """Compute the template-to-device channel map for one custom gate op."""
    check_mode(mode)
    gate = op.custom
    if gate is None:
        raise BindingError(f"op {op.name!r} is not a custom gate")
    override = dict(op.binding_override)
    declared = template_channels(gate)
    slots = used_channels(gate.schedule) | set(override)

    mapping: dict[Channel, Channel] = {}
    for slot in sorted(slots, key=lambda ch: ch.sort_key()):
        is_declared = slot in declared
        if mode == "strict" and not is_declared:
            raise BindingError(
                f"gate {gate.name!r} uses channel {slot.label} outside its "
                f"{gate.num_qubits}-qubit declaration"
            )
        if slot in override:
            dest = override[slot]
            if dest.kind != slot.kind:
                raise BindingError(
                    f"override {slot.label} -> {dest.label} changes channel kind"
                )
            if mode == "strict" and (
                not is_declared or dest != default_target(slot, gate, op.qubits, calibration)
            ):
                raise BindingError(
                    f"override {slot.label} -> {dest.label} does not match the "
                    f"declared qubits of gate {gate.name!r}"
                )
        elif is_declared:
            dest = default_target(slot, gate, op.qubits, calibration)
        else:
            raise BindingError(
                f"channel {slot.label} of gate {gate.name!r} is undeclared and "
                "has no override"
            )
        if not calibration.has_channel(dest):
            raise BindingError(f"bound channel {dest.label} does not exist on this device")
        # Two slots may share a destination (and overlap checks run on the
        # merged schedule later), so no uniqueness constraint here.
        mapping[slot] = dest
    return mapping


def bind_schedule(
    schedule: Schedule,
    mapping: dict[Channel, Channel],
    clbit_map: dict[int, int] | None = None,
) -> Schedule:
    """Rewrite a template schedule onto device channels.

    clbit_map sends template memory slots to circuit clbits; identity when
    omitted.
    """
    entries = []
    for entry in schedule:
        inst = entry.instruction
        if isinstance(inst, Acquire):
            dest = mapping.get(acquire(inst.qubit))
            if dest is None:
                raise BindingError(f"no binding for channel a{inst.qubit}")
            slot = inst.memory_slot
            if clbit_map is not None:
                if slot not in clbit_map:
                    raise BindingError(f"gate writes undeclared memory slot {slot}")
                slot = clbit_map[slot]
            new_inst = Acquire(dest.index, inst.duration, slot)
        else:
            dest = mapping.get(inst.channel)
            if dest is None:
                raise BindingError(f"no binding for channel {inst.channel.label}")
            new_inst = type(inst)(dest, *_payload(inst))
        entries.append(ScheduleEntry(entry.start_time, new_inst))
    return Schedule(tuple(entries))


def _payload(inst) -> tuple:
    fields = [f for f in inst.__dataclass_fields__ if f != "channel"]
    return tuple(getattr(inst, f) for f in fields)
