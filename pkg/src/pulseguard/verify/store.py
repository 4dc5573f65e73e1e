"""Trusted records: publish-time vetting and tamper-evident storage.

A record freezes the full trust anchor for one circuit: the circuit, its
permissive lowering, and the calibration both were produced under, plus
content hashes of all three. `fetch` recomputes the hashes on every read
and quarantines the record at the first discrepancy, so storage is not
part of the trusted computing base.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

from pulseguard.core import (
    CalibrationSnapshot,
    GateCircuit,
    LoweringError,
    QuarantineError,
    Schedule,
    StoreError,
    serialize,
)
from pulseguard.core.errors import SchemaError
from pulseguard.core.serialize import content_hash, gate_level_hash
from pulseguard.lowering import lower_circuit
from pulseguard.verify.channels import verify_channels
from pulseguard.verify.semantics import verify_semantics

__all__ = ["TrustedRecord", "publish", "fetch"]

_RECORD_FILE = "record.json"
_QUARANTINE = "quarantine"


@dataclass(frozen=True, slots=True)
class TrustedRecord:
    """Everything needed to re-verify a circuit later.

    circuit_hash covers gate-level content only (custom-gate schedules
    and binding overrides excluded), which is exactly the identity a
    pulse-level tamper preserves; pulse_config_hash and calibration_hash
    pin the artifacts such a tamper would have to alter.
    """

    circuit_hash: str
    pulse_config_hash: str
    calibration_hash: str
    timestamp: float
    circuit: GateCircuit
    schedule: Schedule
    calibration: CalibrationSnapshot


def _decode_record(obj: dict, path: str) -> TrustedRecord:
    for name in ("circuit_hash", "pulse_config_hash", "calibration_hash"):
        if not isinstance(obj.get(name), str):
            raise SchemaError(f"{path}/{name}", "expected a string")
    ts = obj.get("timestamp")
    if isinstance(ts, bool) or not isinstance(ts, (int, float)):
        raise SchemaError(f"{path}/timestamp", "expected a number")
    parts = {}
    for name, cls in (
        ("circuit", GateCircuit),
        ("schedule", Schedule),
        ("calibration", CalibrationSnapshot),
    ):
        value = serialize.decode(obj.get(name), f"{path}/{name}")
        if not isinstance(value, cls):
            raise SchemaError(f"{path}/{name}", f"expected a {cls.__name__}")
        parts[name] = value
    return TrustedRecord(
        obj["circuit_hash"],
        obj["pulse_config_hash"],
        obj["calibration_hash"],
        float(ts),
        parts["circuit"],
        parts["schedule"],
        parts["calibration"],
    )


serialize.register(TrustedRecord, "trusted_record", _decode_record)


def make_record(
    circuit: GateCircuit, calibration: CalibrationSnapshot
) -> TrustedRecord:
    """Vet a circuit and build its trust anchor (no storage involved).

    Publish-time vetting runs the stages that need no prior record: the
    channel audit and the semantic check. A circuit that fails either has
    no business becoming an anchor.
    """
    try:
        schedule = lower_circuit(circuit, calibration, mode="permissive")
    except LoweringError as exc:
        raise StoreError(f"circuit does not lower: {exc}") from None
    for report in (
        verify_channels(circuit, calibration),
        verify_semantics(circuit, calibration),
    ):
        if not report.passed:
            first = report.errors[0]
            raise StoreError(
                f"circuit fails the {report.stage} audit: "
                f"[{first.kind}] {first.location}: {first.explanation}"
            )
    return TrustedRecord(
        circuit_hash=gate_level_hash(circuit),
        pulse_config_hash=content_hash(schedule),
        calibration_hash=content_hash(calibration),
        timestamp=calibration.timestamp,
        circuit=circuit,
        schedule=schedule,
        calibration=calibration,
    )


def publish(
    store_dir: str | Path,
    circuit: GateCircuit,
    calibration: CalibrationSnapshot,
) -> TrustedRecord:
    """Vet the circuit and write its record under the store directory."""
    record = make_record(circuit, calibration)
    target = Path(store_dir) / record.circuit_hash
    target.mkdir(parents=True, exist_ok=True)
    (target / _RECORD_FILE).write_bytes(serialize.canonical_serialize(record))
    return record


def _quarantine(store: Path, circuit_hash: str, reason: str) -> QuarantineError:
    source = store / circuit_hash
    pen = store / _QUARANTINE
    pen.mkdir(parents=True, exist_ok=True)
    destination = pen / circuit_hash
    if destination.exists():
        shutil.rmtree(destination)
    shutil.move(str(source), str(destination))
    return QuarantineError(
        f"record {circuit_hash} failed its integrity recheck ({reason}); "
        f"moved to {destination}"
    )


def fetch(store_dir: str | Path, circuit_hash: str) -> TrustedRecord:
    """Load a record, recomputing every hash before trusting it."""
    store = Path(store_dir)
    path = store / circuit_hash / _RECORD_FILE
    if not path.is_file():
        raise StoreError(f"no trusted record for {circuit_hash} in {store}")
    try:
        record = serialize.deserialize(path.read_bytes(), TrustedRecord)
    except SchemaError as exc:
        raise _quarantine(store, circuit_hash, f"unreadable: {exc}") from None
    checks = (
        ("circuit", gate_level_hash(record.circuit), record.circuit_hash),
        ("schedule", content_hash(record.schedule), record.pulse_config_hash),
        ("calibration", content_hash(record.calibration), record.calibration_hash),
    )
    for what, recomputed, stored in checks:
        if recomputed != stored:
            raise _quarantine(store, circuit_hash, f"{what} hash mismatch")
    if record.circuit_hash != circuit_hash:
        raise _quarantine(store, circuit_hash, "stored under the wrong key")
    # Timestamp is the one field outside the component hashes; publish
    # copies it from the calibration, so inconsistency means an edit.
    if record.timestamp != record.calibration.timestamp:
        raise _quarantine(store, circuit_hash, "timestamp does not match calibration")
    return record
