"""Verification stages, the trusted store, and quarantine behavior."""

import json

import pytest

from pulseguard.core import (
    GateCircuit,
    GateOp,
    QuarantineError,
    StoreError,
    drift_snapshot,
    drive,
    synthesize_snapshot,
)
from pulseguard.attacks import FLIP_KINDS, build_flip_gadget, qubit_plunder
from pulseguard.lowering import gate_from_circuit
from pulseguard.verify import (
    Finding,
    STAGES,
    Tolerances,
    VerificationReport,
    fetch,
    make_record,
    pipeline_passed,
    publish,
    verify_pipeline,
)


EXPECTED_STAGE = {
    "plunder": "channel",
    "block": "channel",
    "reorder": "reference",
    "timing": "reference",
    "frequency": "syntax",
    "phase": "syntax",
    "waveform": "syntax",
}


def bell_circuit():
    return GateCircuit(
        2,
        2,
        (
            GateOp("h", (0,)),
            GateOp("cx", (0, 1)),
            GateOp("measure", (0,), clbits=(0,)),
            GateOp("measure", (1,), clbits=(1,)),
        ),
    )


def test_clean_circuit_passes_every_stage(cal2q):
    circuit = bell_circuit()
    record = make_record(circuit, cal2q)
    reports = verify_pipeline(circuit, record, cal2q)
    assert tuple(r.stage for r in reports) == STAGES
    assert pipeline_passed(reports)


def test_channel_failure_short_circuits(cal2q):
    sub = GateCircuit(1, 0, (GateOp("x", (0,)),))
    gate = gate_from_circuit("probe", sub, cal2q, qubits=(0,))
    circuit = GateCircuit(2, 0, (GateOp("probe", (0,), custom=gate),))
    record = make_record(circuit, cal2q)
    tampered, _ = qubit_plunder(circuit, 0, {drive(0): drive(1)})
    reports = verify_pipeline(tampered, record, cal2q)
    assert len(reports) == 1
    assert reports[0].stage == "channel"
    assert not pipeline_passed(reports)


@pytest.mark.parametrize("kind", FLIP_KINDS)
def test_each_gadget_trips_its_designated_stage(kind):
    calibration = synthesize_snapshot(2, coupling=((0, 1),), seed=5)
    clean, _ = build_flip_gadget(calibration, kind, armed=False)
    armed, _ = build_flip_gadget(calibration, kind, armed=True)
    record = make_record(clean, calibration)
    assert pipeline_passed(verify_pipeline(clean, record, calibration))
    reports = verify_pipeline(armed, record, calibration)
    assert not pipeline_passed(reports)
    flagged = {r.stage for r in reports if not r.passed}
    assert EXPECTED_STAGE[kind] in flagged


def test_vendor_rescaled_drift_still_passes(cal2q):
    # Recalibration scales templates and rabi_scale together, so observed
    # amplitudes differ from the record by exactly the per-channel ratio;
    # the amplitude check accepts either the raw or the ratio-corrected
    # comparison, keeping honest drift out of the findings.
    circuit = bell_circuit()
    record = make_record(circuit, cal2q)
    for seed in (1, 2, 3):
        drifted = drift_snapshot(cal2q, hours=72.0, seed=seed)
        reports = verify_pipeline(circuit, record, drifted)
        assert pipeline_passed(reports), [
            (r.stage, r.errors) for r in reports if not r.passed
        ]


def test_oversized_amplitude_fails_under_drift(cal2q):
    import dataclasses

    circuit = bell_circuit()
    record = make_record(circuit, cal2q)
    drifted = drift_snapshot(cal2q, hours=72.0, seed=1)
    q0 = drifted.qubit(0)
    spiked = dataclasses.replace(
        drifted,
        qubits=(
            dataclasses.replace(
                q0, sx_template=q0.sx_template.with_amp(q0.sx_template.amp * 1.5)
            ),
        )
        + drifted.qubits[1:],
    )
    reports = verify_pipeline(circuit, record, spiked)
    flagged = {r.stage for r in reports if not r.passed}
    assert "syntax" in flagged


def test_make_record_rejects_unlowerable_circuits(cal2q):
    circuit = GateCircuit(2, 0, (GateOp("cx", (1, 0)),))
    with pytest.raises(StoreError, match="does not lower"):
        make_record(circuit, cal2q)


def test_make_record_rejects_silent_declared_qubits(cal2q):
    sub = GateCircuit(1, 0, ())
    gate = gate_from_circuit("mute", sub, cal2q, qubits=(0,))
    circuit = GateCircuit(2, 0, (GateOp("mute", (0,), custom=gate),))
    with pytest.raises(StoreError, match="channel"):
        make_record(circuit, cal2q)


def test_make_record_rejects_false_declarations(cal2q):
    sub = GateCircuit(1, 0, (GateOp("x", (0,)),))
    identity = ((1, 0), (0, 1))
    gate = gate_from_circuit(
        "liar", sub, cal2q, qubits=(0,), declared_unitary=identity
    )
    circuit = GateCircuit(2, 0, (GateOp("liar", (0,), custom=gate),))
    with pytest.raises(StoreError, match="semantics"):
        make_record(circuit, cal2q)


def test_publish_then_fetch_round_trips(tmp_path, cal2q):
    circuit = bell_circuit()
    record = publish(tmp_path, circuit, cal2q)
    fetched = fetch(tmp_path, record.circuit_hash)
    assert fetched == record


def test_fetch_unknown_hash_is_a_store_error(tmp_path):
    with pytest.raises(StoreError, match="no trusted record"):
        fetch(tmp_path, "0" * 64)


def record_path(store, record):
    return store / record.circuit_hash / "record.json"


def test_unreadable_record_is_quarantined(tmp_path, cal2q):
    record = publish(tmp_path, bell_circuit(), cal2q)
    record_path(tmp_path, record).write_bytes(b"not json at all")
    with pytest.raises(QuarantineError, match="unreadable"):
        fetch(tmp_path, record.circuit_hash)
    assert not (tmp_path / record.circuit_hash).exists()
    assert (tmp_path / "quarantine" / record.circuit_hash).exists()


def test_hash_mismatch_is_quarantined(tmp_path, cal2q):
    record = publish(tmp_path, bell_circuit(), cal2q)
    path = record_path(tmp_path, record)
    doc = json.loads(path.read_bytes())
    doc["pulse_config_hash"] = "f" * len(doc["pulse_config_hash"])
    path.write_text(json.dumps(doc))
    with pytest.raises(QuarantineError, match="schedule hash mismatch"):
        fetch(tmp_path, record.circuit_hash)


def test_wrong_key_is_quarantined(tmp_path, cal2q):
    import shutil

    record = publish(tmp_path, bell_circuit(), cal2q)
    alias = "a" * len(record.circuit_hash)
    shutil.copytree(tmp_path / record.circuit_hash, tmp_path / alias)
    with pytest.raises(QuarantineError, match="wrong key"):
        fetch(tmp_path, alias)
    # The original entry is untouched.
    assert fetch(tmp_path, record.circuit_hash) == record


def test_timestamp_edit_is_quarantined(tmp_path, cal2q):
    record = publish(tmp_path, bell_circuit(), cal2q)
    path = record_path(tmp_path, record)
    doc = json.loads(path.read_bytes())
    doc["timestamp"] = doc["timestamp"] + 1.0
    path.write_text(json.dumps(doc))
    with pytest.raises(QuarantineError, match="timestamp"):
        fetch(tmp_path, record.circuit_hash)


def test_quarantined_record_is_gone_afterwards(tmp_path, cal2q):
    record = publish(tmp_path, bell_circuit(), cal2q)
    record_path(tmp_path, record).write_bytes(b"junk")
    with pytest.raises(QuarantineError):
        fetch(tmp_path, record.circuit_hash)
    with pytest.raises(StoreError, match="no trusted record"):
        fetch(tmp_path, record.circuit_hash)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"freq_tol": -1e-3},
        {"phase_tol": -1.0},
        {"amp_rel_tol": -0.1},
        {"duration_tol": -1},
        {"fidelity_threshold": 0.0},
        {"fidelity_threshold": 1.5},
    ],
)
def test_tolerances_reject_nonsense(kwargs):
    with pytest.raises(ValueError):
        Tolerances(**kwargs)


def test_finding_severity_is_checked():
    with pytest.raises(ValueError):
        Finding("fatal", "kind", "loc", "boom")


def test_report_stage_is_checked():
    with pytest.raises(ValueError):
        VerificationReport("vibes", ())


def test_report_pass_logic():
    info = Finding("info", "note", "d0", "context only")
    error = Finding("error", "amplitude", "d0", "wrong")
    assert VerificationReport("syntax", (info,)).passed
    assert not VerificationReport("syntax", (info, error)).passed
    assert pipeline_passed((VerificationReport("syntax", (info,)),))
    assert not pipeline_passed((VerificationReport("syntax", (error,)),))
