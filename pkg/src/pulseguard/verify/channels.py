"""Stage 1: does every custom gate stay on the channels of its qubits?

Channel attacks never touch pulse content; they reroute it. This stage
audits each custom op's resolved binding: every destination channel must
act only on the op's own qubits (anything else is a plunder), every
declared qubit must actually receive drive (a silent qubit is a block),
and every recorded outcome must land in a classical bit the op declares.
"""

from __future__ import annotations

from pulseguard.core import (
    Acquire,
    BindingError,
    CalibrationSnapshot,
    GateCircuit,
    Play,
)
from pulseguard.lowering.binding import bind_schedule, resolve_binding
from pulseguard.verify.findings import Finding, Tolerances, VerificationReport

__all__ = ["verify_channels"]


def verify_channels(
    circuit: GateCircuit,
    calibration: CalibrationSnapshot,
    tolerances: Tolerances | None = None,
) -> VerificationReport:
    """Audit custom-gate channel bindings; tolerances are unused here but
    accepted so all stages share one call shape."""
    del tolerances
    findings: list[Finding] = []
    for index, op in enumerate(circuit.ops):
        if not op.is_custom:
            continue
        where = f"op {index} ({op.name})"
        try:
            mapping = resolve_binding(op, calibration, mode="permissive")
            bound = bind_schedule(
                op.custom.schedule,
                mapping,
                {j: op.clbits[j] for j in range(len(op.clbits))},
            )
        except BindingError as exc:
            findings.append(
                Finding("error", "unbindable", where, str(exc))
            )
            continue

        own = set(op.qubits)
        for slot in sorted(mapping, key=lambda ch: ch.sort_key()):
            dest = mapping[slot]
            touched = calibration.channel_qubits(dest)
            foreign = sorted(set(touched) - own)
            if foreign:
                findings.append(
                    Finding(
                        "error",
                        "foreign-channel",
                        f"{where}, slot {slot.label}",
                        f"binding routes pulses to qubit(s) {foreign} the op "
                        "does not act on",
                        measured=dest.label,
                        expected=f"channels of qubits {sorted(own)}",
                    )
                )

        pulsed: set[int] = set()
        for entry in bound:
            inst = entry.instruction
            if isinstance(inst, Play):
                pulsed.update(calibration.channel_qubits(inst.channel))
            elif isinstance(inst, Acquire):
                pulsed.add(inst.qubit)
        for q in op.qubits:
            if q not in pulsed:
                findings.append(
                    Finding(
                        "error",
                        "qubit-blocked",
                        where,
                        f"declared qubit {q} receives no pulse or readout; "
                        "delays alone leave it idle",
                        measured="no occupying pulse",
                        expected=f"at least one pulse touching qubit {q}",
                    )
                )

        # Memory-slot containment is enforced during binding itself (an
        # undeclared template slot fails bind_schedule above), so a bound
        # Acquire can only write clbits the op declares.
    return VerificationReport("channel", tuple(findings))
