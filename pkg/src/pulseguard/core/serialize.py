"""Canonical JSON codec with SHA-256 content addressing.

Every document is JSON with sorted keys and compact separators; complex
numbers are [re, im] pairs, times are integers, and dataclasses carry a
"type" tag. Equal values therefore serialize to identical bytes, and
content_hash is stable across processes.

The gate-level digest hashes a projection of a circuit that excludes
custom-gate schedules and binding overrides: it identifies what the
circuit claims to do, not how its pulses implement it.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Callable

import numpy as np

from pulseguard.core.calibration import (
    CalibrationSnapshot,
    PairCalibration,
    QubitCalibration,
    TimingConstraints,
)
from pulseguard.core.channels import Channel
from pulseguard.core.errors import SchemaError
from pulseguard.core.gates import CustomGate, GateCircuit, GateOp
from pulseguard.core.instructions import (
    Acquire,
    Delay,
    Play,
    SetFrequency,
    SetPhase,
    ShiftFrequency,
    ShiftPhase,
)
from pulseguard.core.schedule import Schedule, ScheduleEntry
from pulseguard.core.waveforms import ParametricWaveform, SampledWaveform

_TAG_BY_CLASS: dict[type, str] = {}
_DECODER_BY_TAG: dict[str, Callable[[dict, str], Any]] = {}


def register(cls: type, tag: str, decoder: Callable[[dict, str], Any]) -> None:
    """Add a dataclass to the codec. Used by modules with their own documents."""
    _TAG_BY_CLASS[cls] = tag
    _DECODER_BY_TAG[tag] = decoder


def encode(value: Any) -> Any:
    """Lower a value to JSON-compatible form."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.complexfloating):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(encode(v) for v in value)
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise SchemaError("$", f"mapping keys must be strings, got {k!r}")
            if k == "type":
                raise SchemaError("$", "plain mappings may not use the reserved key 'type'")
            out[k] = encode(v)
        return out
    tag = _TAG_BY_CLASS.get(type(value))
    if tag is not None:
        doc: dict[str, Any] = {"type": tag}
        for name in value.__dataclass_fields__:
            doc[name] = encode(getattr(value, name))
        return doc
    raise SchemaError("$", f"cannot encode values of type {type(value).__name__}")


def decode(obj: Any, path: str = "$") -> Any:
    """Rebuild a value from JSON form (inverse of encode)."""
    if isinstance(obj, dict):
        tag = obj.get("type")
        if tag is None:
            return {k: decode(v, f"{path}/{k}") for k, v in obj.items()}
        if not isinstance(tag, str):
            raise SchemaError(path, "the 'type' tag must be a string")
        decoder = _DECODER_BY_TAG.get(tag)
        if decoder is None:
            raise SchemaError(path, f"unknown document type {tag!r}")
        return decoder(obj, path)
    if isinstance(obj, list):
        return [decode(v, f"{path}/{i}") for i, v in enumerate(obj)]
    return obj


def canonical_serialize(value: Any) -> bytes:
    return json.dumps(
        encode(value), sort_keys=True, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


def deserialize(data: bytes | str, expected: type | None = None) -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from None
    value = decode(obj)
    if expected is not None and not isinstance(value, expected):
        raise SchemaError(
            "$", f"expected a {expected.__name__}, got {type(value).__name__}"
        )
    return value


def content_hash(value: Any) -> str:
    """Lowercase-hex SHA-256 of the canonical bytes."""
    return hashlib.sha256(canonical_serialize(value)).hexdigest()


def hash_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------------------
# field readers


def _field(obj: dict, name: str, path: str) -> Any:
    if name not in obj:
        raise SchemaError(f"{path}/{name}", "missing field")
    return obj[name]


def _int(obj: dict, name: str, path: str) -> int:
    v = _field(obj, name, path)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{path}/{name}", f"expected an integer, got {v!r}")
    return v


def _float(obj: dict, name: str, path: str) -> float:
    v = _field(obj, name, path)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{path}/{name}", f"expected a number, got {v!r}")
    return float(v)


def _str(obj: dict, name: str, path: str) -> str:
    v = _field(obj, name, path)
    if not isinstance(v, str):
        raise SchemaError(f"{path}/{name}", f"expected a string, got {v!r}")
    return v


def _complex_value(v: Any, path: str) -> complex:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or any(isinstance(p, bool) or not isinstance(p, (int, float)) for p in v)
    ):
        raise SchemaError(path, f"expected [re, im], got {v!r}")
    return complex(v[0], v[1])


def _list(obj: dict, name: str, path: str) -> list:
    v = _field(obj, name, path)
    if not isinstance(v, list):
        raise SchemaError(f"{path}/{name}", f"expected a list, got {v!r}")
    return v


def _optional_float(obj: dict, name: str, path: str) -> float | None:
    v = _field(obj, name, path)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{path}/{name}", f"expected a number or null, got {v!r}")
    return float(v)


def _optional_int(obj: dict, name: str, path: str) -> int | None:
    v = _field(obj, name, path)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{path}/{name}", f"expected an integer or null, got {v!r}")
    return v


def _construct(cls: type, path: str, *args, **kwargs) -> Any:
    try:
        return cls(*args, **kwargs)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


# ---------------------------------------------------------------------------
# decoders for the core types


def _decode_channel(obj: dict, path: str) -> Channel:
    return _construct(Channel, path, _str(obj, "kind", path), _int(obj, "index", path))


def _decode_sampled(obj: dict, path: str) -> SampledWaveform:
    raw = _list(obj, "samples", path)
    samples = tuple(
        _complex_value(v, f"{path}/samples/{i}") for i, v in enumerate(raw)
    )
    return _construct(SampledWaveform, path, samples)


def _decode_parametric(obj: dict, path: str) -> ParametricWaveform:
    return _construct(
        ParametricWaveform,
        path,
        _str(obj, "shape", path),
        _int(obj, "duration", path),
        _complex_value(_field(obj, "amp", path), f"{path}/amp"),
        _optional_float(obj, "sigma", path),
        _optional_float(obj, "beta", path),
        _optional_int(obj, "width", path),
    )


def _decode_waveform(obj: Any, path: str) -> SampledWaveform | ParametricWaveform:
    value = decode(obj, path)
    if not isinstance(value, (SampledWaveform, ParametricWaveform)):
        raise SchemaError(path, "expected a waveform")
    return value


def _decode_subchannel(obj: dict, path: str) -> Channel:
    value = decode(_field(obj, "channel", path), f"{path}/channel")
    if not isinstance(value, Channel):
        raise SchemaError(f"{path}/channel", "expected a channel")
    return value


def _decode_play(obj: dict, path: str) -> Play:
    return _construct(
        Play,
        path,
        _decode_subchannel(obj, path),
        _decode_waveform(_field(obj, "waveform", path), f"{path}/waveform"),
    )


def _decode_delay(obj: dict, path: str) -> Delay:
    return _construct(Delay, path, _decode_subchannel(obj, path), _int(obj, "duration", path))


def _decode_set_frequency(obj: dict, path: str) -> SetFrequency:
    return _construct(
        SetFrequency, path, _decode_subchannel(obj, path), _float(obj, "frequency", path)
    )


def _decode_shift_frequency(obj: dict, path: str) -> ShiftFrequency:
    return _construct(
        ShiftFrequency, path, _decode_subchannel(obj, path), _float(obj, "delta", path)
    )


def _decode_set_phase(obj: dict, path: str) -> SetPhase:
    return _construct(
        SetPhase, path, _decode_subchannel(obj, path), _float(obj, "phase", path)
    )


def _decode_shift_phase(obj: dict, path: str) -> ShiftPhase:
    return _construct(
        ShiftPhase, path, _decode_subchannel(obj, path), _float(obj, "delta", path)
    )


def _decode_acquire(obj: dict, path: str) -> Acquire:
    return _construct(
        Acquire,
        path,
        _int(obj, "qubit", path),
        _int(obj, "duration", path),
        _int(obj, "memory_slot", path),
    )


def _decode_entry(obj: dict, path: str) -> ScheduleEntry:
    instruction = decode(_field(obj, "instruction", path), f"{path}/instruction")
    return _construct(ScheduleEntry, path, _int(obj, "start_time", path), instruction)


def _decode_schedule(obj: dict, path: str) -> Schedule:
    raw = _list(obj, "entries", path)
    entries = []
    for i, e in enumerate(raw):
        entry = decode(e, f"{path}/entries/{i}")
        if not isinstance(entry, ScheduleEntry):
            raise SchemaError(f"{path}/entries/{i}", "expected a schedule entry")
        entries.append(entry)
    return _construct(Schedule, path, tuple(entries))


def _decode_unitary(v: Any, path: str) -> tuple[tuple[complex, ...], ...] | None:
    if v is None:
        return None
    if not isinstance(v, list):
        raise SchemaError(path, "expected a matrix or null")
    rows = []
    for i, row in enumerate(v):
        if not isinstance(row, list):
            raise SchemaError(f"{path}/{i}", "expected a matrix row")
        rows.append(
            tuple(_complex_value(cell, f"{path}/{i}/{j}") for j, cell in enumerate(row))
        )
    return tuple(rows)


def _decode_pairs(obj: dict, name: str, path: str) -> tuple[tuple[int, int], ...]:
    raw = _list(obj, name, path)
    pairs = []
    for i, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 2:
            raise SchemaError(f"{path}/{name}/{i}", f"expected [control, target], got {p!r}")
        pairs.append((p[0], p[1]))
    return tuple(pairs)


def _decode_custom_gate(obj: dict, path: str) -> CustomGate:
    schedule = decode(_field(obj, "schedule", path), f"{path}/schedule")
    if not isinstance(schedule, Schedule):
        raise SchemaError(f"{path}/schedule", "expected a schedule")
    return _construct(
        CustomGate,
        path,
        _str(obj, "name", path),
        _int(obj, "num_qubits", path),
        _int(obj, "num_clbits", path),
        _decode_pairs(obj, "pairs", path),
        schedule,
        _decode_unitary(_field(obj, "declared_unitary", path), f"{path}/declared_unitary"),
    )


def _decode_override(obj: dict, path: str) -> tuple[tuple[Channel, Channel], ...]:
    raw = _list(obj, "binding_override", path)
    items = []
    for i, pair in enumerate(raw):
        p = f"{path}/binding_override/{i}"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(p, "expected [slot, destination]")
        slot = decode(pair[0], f"{p}/0")
        dest = decode(pair[1], f"{p}/1")
        if not isinstance(slot, Channel) or not isinstance(dest, Channel):
            raise SchemaError(p, "expected a pair of channels")
        items.append((slot, dest))
    return tuple(items)


def _decode_gate_op(obj: dict, path: str) -> GateOp:
    custom_raw = _field(obj, "custom", path)
    custom = None
    if custom_raw is not None:
        custom = decode(custom_raw, f"{path}/custom")
        if not isinstance(custom, CustomGate):
            raise SchemaError(f"{path}/custom", "expected a custom gate")
    params = []
    for i, v in enumerate(_list(obj, "params", path)):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{path}/params/{i}", f"expected a number, got {v!r}")
        params.append(float(v))
    return _construct(
        GateOp,
        path,
        _str(obj, "name", path),
        tuple(_list(obj, "qubits", path)),
        tuple(params),
        tuple(_list(obj, "clbits", path)),
        custom,
        _decode_override(obj, path),
    )


def _decode_circuit(obj: dict, path: str) -> GateCircuit:
    raw = _list(obj, "ops", path)
    ops = []
    for i, o in enumerate(raw):
        op = decode(o, f"{path}/ops/{i}")
        if not isinstance(op, GateOp):
            raise SchemaError(f"{path}/ops/{i}", "expected a gate op")
        ops.append(op)
    return _construct(
        GateCircuit,
        path,
        _int(obj, "num_qubits", path),
        _int(obj, "num_clbits", path),
        tuple(ops),
    )


def _decode_timing(obj: dict, path: str) -> TimingConstraints:
    return _construct(
        TimingConstraints,
        path,
        _float(obj, "dt", path),
        _int(obj, "granularity", path),
        _int(obj, "pulse_alignment", path),
        _int(obj, "acquire_alignment", path),
    )


def _decode_qubit_calibration(obj: dict, path: str) -> QubitCalibration:
    def wf(name: str):
        value = decode(_field(obj, name, path), f"{path}/{name}")
        if not isinstance(value, ParametricWaveform):
            raise SchemaError(f"{path}/{name}", "expected a parametric waveform")
        return value

    return _construct(
        QubitCalibration,
        path,
        _float(obj, "frequency", path),
        _float(obj, "anharmonicity", path),
        _float(obj, "t1", path),
        _float(obj, "t2", path),
        _float(obj, "rabi_scale", path),
        wf("x_template"),
        wf("sx_template"),
        wf("measure_template"),
        _int(obj, "readout_duration", path),
    )


def _decode_pair_calibration(obj: dict, path: str) -> PairCalibration:
    pair_raw = _list(obj, "pair", path)
    if len(pair_raw) != 2:
        raise SchemaError(f"{path}/pair", "expected [control, target]")
    template = decode(_field(obj, "cr_template", path), f"{path}/cr_template")
    if not isinstance(template, ParametricWaveform):
        raise SchemaError(f"{path}/cr_template", "expected a parametric waveform")
    return _construct(
        PairCalibration,
        path,
        (pair_raw[0], pair_raw[1]),
        _float(obj, "frequency", path),
        _float(obj, "cr_scale", path),
        template,
    )


def _decode_snapshot(obj: dict, path: str) -> CalibrationSnapshot:
    timing = decode(_field(obj, "timing", path), f"{path}/timing")
    if not isinstance(timing, TimingConstraints):
        raise SchemaError(f"{path}/timing", "expected timing constraints")
    qubits = []
    for i, q in enumerate(_list(obj, "qubits", path)):
        qc = decode(q, f"{path}/qubits/{i}")
        if not isinstance(qc, QubitCalibration):
            raise SchemaError(f"{path}/qubits/{i}", "expected a qubit calibration")
        qubits.append(qc)
    pairs = []
    for i, p in enumerate(_list(obj, "pairs", path)):
        pc = decode(p, f"{path}/pairs/{i}")
        if not isinstance(pc, PairCalibration):
            raise SchemaError(f"{path}/pairs/{i}", "expected a pair calibration")
        pairs.append(pc)
    band_raw = _list(obj, "forbidden_band", path)
    if len(band_raw) != 2:
        raise SchemaError(f"{path}/forbidden_band", "expected [low, high]")
    return _construct(
        CalibrationSnapshot,
        path,
        _float(obj, "timestamp", path),
        timing,
        tuple(qubits),
        tuple(pairs),
        (band_raw[0], band_raw[1]),
    )


register(Channel, "channel", _decode_channel)
register(SampledWaveform, "sampled_waveform", _decode_sampled)
register(ParametricWaveform, "parametric_waveform", _decode_parametric)
register(Play, "play", _decode_play)
register(Delay, "delay", _decode_delay)
register(SetFrequency, "set_frequency", _decode_set_frequency)
register(ShiftFrequency, "shift_frequency", _decode_shift_frequency)
register(SetPhase, "set_phase", _decode_set_phase)
register(ShiftPhase, "shift_phase", _decode_shift_phase)
register(Acquire, "acquire", _decode_acquire)
register(ScheduleEntry, "entry", _decode_entry)
register(Schedule, "schedule", _decode_schedule)
register(CustomGate, "custom_gate", _decode_custom_gate)
register(GateOp, "gate_op", _decode_gate_op)
register(GateCircuit, "circuit", _decode_circuit)
register(TimingConstraints, "timing_constraints", _decode_timing)
register(QubitCalibration, "qubit_calibration", _decode_qubit_calibration)
register(PairCalibration, "pair_calibration", _decode_pair_calibration)
register(CalibrationSnapshot, "calibration", _decode_snapshot)


# ---------------------------------------------------------------------------
# gate-level projection


def gate_level_view(circuit: GateCircuit) -> dict:
    """The circuit's declared behavior: ops without pulse payloads.

    Custom-gate schedules and binding overrides are omitted on purpose;
    two circuits that differ only in pulse implementation share a view.
    """
    ops = []
    for op in circuit.ops:
        entry: dict[str, Any] = {
            "name": op.name,
            "qubits": list(op.qubits),
            "params": list(op.params),
            "clbits": list(op.clbits),
        }
        if op.custom is not None:
            entry["custom"] = {
                "name": op.custom.name,
                "num_qubits": op.custom.num_qubits,
                "num_clbits": op.custom.num_clbits,
                "pairs": [list(p) for p in op.custom.pairs],
                "declared_unitary": encode(op.custom.declared_unitary),
            }
        ops.append(entry)
    return {
        "type": "gate-level-view",
        "num_qubits": circuit.num_qubits,
        "num_clbits": circuit.num_clbits,
        "ops": ops,
    }


def gate_level_hash(circuit: GateCircuit) -> str:
    view = json.dumps(
        gate_level_view(circuit), sort_keys=True, separators=(",", ":"), allow_nan=False
    )
    return hashlib.sha256(view.encode("utf-8")).hexdigest()
