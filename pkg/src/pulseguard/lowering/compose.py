"""Building custom gates out of circuits.

A custom gate's schedule lives on template channels, so a sub-circuit is
lowered against a projection of the device calibration onto the qubits
the gate will run on; the resulting channel indices are template indices
by construction.
"""

from __future__ import annotations

from dataclasses import replace

from pulseguard.core.calibration import CalibrationSnapshot
from pulseguard.core.errors import LoweringError
from pulseguard.core.gates import CustomGate, GateCircuit
from pulseguard.lowering.lower import lower_circuit


def project_calibration(
    calibration: CalibrationSnapshot,
    qubits: tuple[int, ...],
    pairs: tuple[tuple[int, int], ...] = (),
) -> CalibrationSnapshot:
    """Snapshot whose qubit j is device qubit qubits[j].

    pairs are template-index couplings; each must exist on the device
    between the corresponding device qubits, in the same direction.
    """
    if len(set(qubits)) != len(qubits):
        raise LoweringError(f"projection qubits must be distinct, got {qubits}")
    qubit_cals = tuple(calibration.qubit(q) for q in qubits)
    pair_cals = []
    for c, t in pairs:
        ordinal = calibration.pair_ordinal((qubits[c], qubits[t]))
        pair_cals.append(replace(calibration.pair_calibration(ordinal), pair=(c, t)))
    return CalibrationSnapshot(
        timestamp=calibration.timestamp,
        timing=calibration.timing,
        qubits=qubit_cals,
        pairs=tuple(pair_cals),
        forbidden_band=calibration.forbidden_band,
    )


def gate_from_circuit(
    name: str,
    circuit: GateCircuit,
    calibration: CalibrationSnapshot,
    qubits: tuple[int, ...],
    pairs: tuple[tuple[int, int], ...] = (),
    declared_unitary=None,
) -> CustomGate:
    """Lower a sub-circuit into a reusable custom gate.

    The declared unitary is whatever the caller claims the gate does;
    nothing checks it here, that is the verifier's job.
    """
    projected = project_calibration(calibration, qubits, pairs)
    schedule = lower_circuit(circuit, projected, mode="strict")
    return CustomGate(
        name=name,
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
        pairs=pairs,
        schedule=schedule,
        declared_unitary=declared_unitary,
    )
