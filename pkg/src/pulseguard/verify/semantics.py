"""Stage 4: does each custom gate do what it declares?

The backstop. Earlier stages compare representations; this one simulates
each custom gate's bound pulse fragment (misalignment model included)
and scores it against the declared unitary. Whatever a tamper did to get
here, if it changed the physics it shows up as lost fidelity; if the
gate declares nothing, that fact itself is reported.
"""

from __future__ import annotations

import numpy as np

from pulseguard.core import (
    Acquire,
    CalibrationSnapshot,
    GateCircuit,
    LoweringError,
    Play,
    SimulationError,
)
from pulseguard.core.matrices import embed, fidelity
from pulseguard.lowering import lower_gate
from pulseguard.sim import simulate_unitary
from pulseguard.verify.findings import Finding, Tolerances, VerificationReport

__all__ = ["verify_semantics"]


def verify_semantics(
    circuit: GateCircuit,
    calibration: CalibrationSnapshot,
    tolerances: Tolerances | None = None,
) -> VerificationReport:
    """Simulate every custom gate and compare against its declaration."""
    tol = tolerances or Tolerances()
    findings: list[Finding] = []
    for index, op in enumerate(circuit.ops):
        if not op.is_custom:
            continue
        where = f"op {index} ({op.name})"
        if op.custom.declared_unitary is None:
            findings.append(
                Finding(
                    "info",
                    "undeclared-semantics",
                    where,
                    "gate declares no unitary, so its action cannot be checked",
                )
            )
            continue
        try:
            fragment = lower_gate(op, calibration, mode="permissive")
        except LoweringError as exc:
            findings.append(Finding("error", "unbindable", where, str(exc)))
            continue
        if any(
            isinstance(e.instruction, Acquire)
            or (isinstance(e.instruction, Play) and e.channel.kind == "measure")
            for e in fragment
        ):
            findings.append(
                Finding(
                    "info",
                    "unverifiable-semantics",
                    where,
                    "gate performs readout; non-unitary gates are out of scope "
                    "for the fidelity check",
                )
            )
            continue
        try:
            actual = simulate_unitary(fragment, calibration)
        except SimulationError as exc:
            findings.append(
                Finding(
                    "error",
                    "overlap",
                    where,
                    f"fragment is not executable as written: {exc}",
                )
            )
            continue
        declared = embed(
            np.array(op.custom.declared_unitary, dtype=np.complex128),
            op.qubits,
            calibration.num_qubits,
        )
        score = fidelity(actual, declared)
        if score < tol.fidelity_threshold:
            findings.append(
                Finding(
                    "error",
                    "semantic-drift",
                    where,
                    "simulated action disagrees with the declared unitary",
                    measured=f"fidelity {score:.6f}",
                    expected=f">= {tol.fidelity_threshold:g}",
                )
            )
    return VerificationReport("semantics", tuple(findings))
