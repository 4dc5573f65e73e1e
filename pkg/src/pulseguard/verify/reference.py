"""Stage 2: does the pulse program still have the recorded shape?

Re-lowers the submitted circuit and compares its timeline, channel by
channel, against the schedule frozen in the trusted record: instruction
kinds, start times, durations, envelope families, and readout wiring.
Parameter values (amplitudes, phases, frequencies) are deliberately out
of scope here; the syntax stage owns those, with drift-aware tolerances.
"""

from __future__ import annotations

from pulseguard.core import (
    Acquire,
    CalibrationSnapshot,
    Channel,
    GateCircuit,
    LoweringError,
    Play,
    Schedule,
    ScheduleEntry,
)
from pulseguard.core.serialize import gate_level_hash
from pulseguard.lowering import lower_circuit
from pulseguard.verify.findings import Finding, Tolerances, VerificationReport
from pulseguard.verify.store import TrustedRecord

__all__ = ["verify_reference"]


def _descriptor(entry: ScheduleEntry) -> tuple:
    inst = entry.instruction
    name = type(inst).__name__
    if isinstance(inst, Play):
        return (name, entry.start_time, entry.duration, inst.waveform.shape)
    if isinstance(inst, Acquire):
        return (name, entry.start_time, entry.duration, inst.qubit, inst.memory_slot)
    return (name, entry.start_time, entry.duration)


def _describe(entry: ScheduleEntry) -> str:
    parts = _descriptor(entry)
    return f"{parts[0]} at t={entry.start_time} for {entry.duration}"


def _compare_channel(
    channel: Channel,
    observed: tuple[ScheduleEntry, ...],
    trusted: tuple[ScheduleEntry, ...],
    tol: Tolerances,
    findings: list[Finding],
) -> None:
    label = channel.label
    if len(observed) != len(trusted):
        findings.append(
            Finding(
                "error",
                "timeline-length",
                label,
                "channel carries a different number of instructions than the "
                "trusted record",
                measured=str(len(observed)),
                expected=str(len(trusted)),
            )
        )
    for pos, (obs, ref) in enumerate(zip(observed, trusted)):
        where = f"{label}[{pos}]"
        o, r = _descriptor(obs), _descriptor(ref)
        if o[0] != r[0]:
            findings.append(
                Finding(
                    "error",
                    "instruction-kind",
                    where,
                    "instruction kind differs from the trusted record",
                    measured=_describe(obs),
                    expected=_describe(ref),
                )
            )
            continue
        if abs(obs.start_time - ref.start_time) > tol.duration_tol:
            findings.append(
                Finding(
                    "error",
                    "start-time",
                    where,
                    "instruction starts at a different sample",
                    measured=str(obs.start_time),
                    expected=str(ref.start_time),
                )
            )
        if abs(obs.duration - ref.duration) > tol.duration_tol:
            findings.append(
                Finding(
                    "error",
                    "duration",
                    where,
                    "instruction occupies a different number of samples",
                    measured=str(obs.duration),
                    expected=str(ref.duration),
                )
            )
        if o[3:] != r[3:]:
            findings.append(
                Finding(
                    "error",
                    "payload-shape",
                    where,
                    "envelope family or readout wiring differs",
                    measured=str(o[3:]),
                    expected=str(r[3:]),
                )
            )


def verify_reference(
    circuit: GateCircuit,
    trusted: TrustedRecord,
    calibration: CalibrationSnapshot,
    tolerances: Tolerances | None = None,
) -> VerificationReport:
    """Compare the circuit's lowering against the trusted timeline."""
    tol = tolerances or Tolerances()
    observed_hash = gate_level_hash(circuit)
    if observed_hash != trusted.circuit_hash:
        return VerificationReport(
            "reference",
            (
                Finding(
                    "error",
                    "circuit-hash",
                    "circuit",
                    "gate-level content does not match the trusted record; "
                    "refusing to compare timelines of different programs",
                    measured=observed_hash,
                    expected=trusted.circuit_hash,
                ),
            ),
        )
    try:
        candidate = lower_circuit(circuit, calibration, mode="permissive")
    except LoweringError as exc:
        return VerificationReport(
            "reference",
            (Finding("error", "unlowerable", "circuit", str(exc)),),
        )

    findings: list[Finding] = []
    reference: Schedule = trusted.schedule
    for channel in sorted(
        candidate.channels | reference.channels, key=Channel.sort_key
    ):
        _compare_channel(
            channel,
            candidate.on_channel(channel),
            reference.on_channel(channel),
            tol,
            findings,
        )
    return VerificationReport("reference", tuple(findings))
