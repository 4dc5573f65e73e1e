"""Stage 3: are the parameter values the recorded ones, drift aside?

Pairs instructions position by position per channel and checks values:
phase angles to phase_tol, frequency shifts to freq_tol, amplitudes as a
ratio against the trusted record. Calibration drift between publish and
run rescales honest amplitudes by a known per-channel factor (the ratio
of old to new calibrated scales), so a pulse is accepted when it matches
the trusted value either exactly (a template frozen inside a custom
gate) or exactly rescaled (a template re-read from the live snapshot).
Absolute carrier integrity is checked without pairing: every retune must
sit near the channel's calibrated frequency and outside the hardware's
rejected band, so an inserted retune cannot hide behind misalignment.
"""

from __future__ import annotations

import numpy as np

from pulseguard.core import (
    Acquire,
    CalibrationError,
    CalibrationSnapshot,
    Channel,
    Delay,
    GateCircuit,
    LoweringError,
    Play,
    SetFrequency,
    SetPhase,
    ShiftFrequency,
    ShiftPhase,
    Waveform,
)
from pulseguard.core.waveforms import ParametricWaveform
from pulseguard.lowering import lower_circuit
from pulseguard.verify.findings import Finding, Tolerances, VerificationReport
from pulseguard.verify.store import TrustedRecord

__all__ = ["verify_syntax"]

# Below this, a trusted amplitude counts as deliberately zero and the
# observed pulse must be silent too; no ratio is meaningful at 0.
_ZERO_AMP = 1e-12


def _expected_ratio(
    channel: Channel,
    trusted: CalibrationSnapshot,
    current: CalibrationSnapshot,
) -> float:
    """Amplitude factor an honest re-lowering picks up from recalibration."""
    q = channel.index
    if channel.kind == "drive":
        return trusted.qubit(q).rabi_scale / current.qubit(q).rabi_scale
    if channel.kind == "control":
        return (
            trusted.pair_calibration(q).cr_scale
            / current.pair_calibration(q).cr_scale
        )
    if channel.kind == "measure":
        old = abs(trusted.qubit(q).measure_template.amp)
        new = abs(current.qubit(q).measure_template.amp)
        return new / old if old > _ZERO_AMP else 1.0
    return 1.0


def _amplitude(waveform: Waveform) -> complex:
    if isinstance(waveform, ParametricWaveform):
        return waveform.amp
    samples = waveform.materialize()
    return complex(samples[np.argmax(np.abs(samples))]) if len(samples) else 0j


def _envelope_params(waveform: Waveform) -> tuple:
    assert isinstance(waveform, ParametricWaveform)
    return (waveform.shape, waveform.duration, waveform.sigma,
            waveform.beta, waveform.width)


def _carrier_integrity(
    channel: Channel,
    observed,
    calibration: CalibrationSnapshot,
    tol: Tolerances,
    findings: list[Finding],
) -> None:
    if channel.kind == "acquire":
        return
    try:
        calibrated = calibration.channel_frequency(channel)
    except CalibrationError:
        findings.append(
            Finding(
                "warning",
                "unknown-channel",
                channel.label,
                "channel has no calibrated frequency on this device; carrier "
                "integrity not checkable",
            )
        )
        return
    carrier = calibrated
    for pos, entry in enumerate(observed):
        inst = entry.instruction
        if isinstance(inst, SetFrequency):
            carrier = inst.frequency
        elif isinstance(inst, ShiftFrequency):
            carrier += inst.delta
        else:
            continue
        where = f"{channel.label}[{pos}] at t={entry.start_time}"
        if calibration.in_forbidden_band(carrier):
            lo, hi = calibration.forbidden_band
            findings.append(
                Finding(
                    "error",
                    "forbidden-band",
                    where,
                    "retune parks the carrier inside the band the hardware "
                    "refuses to emit",
                    measured=f"{carrier:.6f} GHz",
                    expected=f"outside [{lo:g}, {hi:g}] GHz",
                )
            )
        elif abs(carrier - calibrated) > tol.freq_tol:
            findings.append(
                Finding(
                    "error",
                    "carrier-detuned",
                    where,
                    "retune leaves the carrier off the channel's calibrated "
                    "frequency",
                    measured=f"{carrier:.6f} GHz",
                    expected=f"{calibrated:.6f} +/- {tol.freq_tol:g} GHz",
                )
            )


def _check_play(
    where: str,
    obs: Play,
    ref: Play,
    ratio: float,
    tol: Tolerances,
    findings: list[Finding],
) -> None:
    if abs(obs.waveform.duration - ref.waveform.duration) > tol.duration_tol:
        findings.append(
            Finding(
                "error",
                "duration",
                where,
                "pulse length differs from the trusted record",
                measured=str(obs.waveform.duration),
                expected=str(ref.waveform.duration),
            )
        )
    if obs.waveform.shape != ref.waveform.shape:
        findings.append(
            Finding(
                "error",
                "waveform-shape",
                where,
                "envelope family differs from the trusted record",
                measured=obs.waveform.shape,
                expected=ref.waveform.shape,
            )
        )

    obs_amp = _amplitude(obs.waveform)
    ref_amp = _amplitude(ref.waveform)
    if abs(ref_amp) <= _ZERO_AMP:
        if abs(obs_amp) > _ZERO_AMP:
            findings.append(
                Finding(
                    "error",
                    "amplitude",
                    where,
                    "trusted pulse is silent but the observed one is not",
                    measured=f"{abs(obs_amp):.6g}",
                    expected="0",
                )
            )
    else:
        rescaled = abs(obs_amp / (ref_amp * ratio) - 1)
        frozen = abs(obs_amp / ref_amp - 1)
        if min(rescaled, frozen) > tol.amp_rel_tol:
            findings.append(
                Finding(
                    "error",
                    "amplitude",
                    where,
                    "amplitude matches neither the trusted value nor its "
                    "recalibrated rescale",
                    measured=f"ratio {obs_amp / ref_amp:.6g}",
                    expected=f"1 or {ratio:.6g} (+/- {tol.amp_rel_tol:g} rel)",
                )
            )

    both_parametric = isinstance(obs.waveform, ParametricWaveform) and isinstance(
        ref.waveform, ParametricWaveform
    )
    if both_parametric and _envelope_params(obs.waveform) == _envelope_params(
        ref.waveform
    ):
        return
    o = obs.waveform.materialize()
    r = ref.waveform.materialize()
    o_peak = float(np.max(np.abs(o))) if len(o) else 0.0
    r_peak = float(np.max(np.abs(r))) if len(r) else 0.0
    if o_peak <= _ZERO_AMP or r_peak <= _ZERO_AMP:
        return
    if len(o) != len(r):
        # Already reported as a duration error; shapes cannot be aligned.
        return
    deviation = float(np.max(np.abs(o / o_peak - r / r_peak)))
    if deviation > tol.amp_rel_tol:
        findings.append(
            Finding(
                "error",
                "envelope",
                where,
                "peak-normalized envelopes disagree beyond tolerance",
                measured=f"max deviation {deviation:.6g}",
                expected=f"<= {tol.amp_rel_tol:g}",
            )
        )


def _check_pair(
    where: str,
    obs,
    ref,
    ratio: float,
    tol: Tolerances,
    findings: list[Finding],
) -> None:
    if type(obs) is not type(ref):
        findings.append(
            Finding(
                "info",
                "instruction-kind",
                where,
                "instruction kinds differ; the reference stage owns structure",
                measured=type(obs).__name__,
                expected=type(ref).__name__,
            )
        )
        return
    if isinstance(obs, Play):
        _check_play(where, obs, ref, ratio, tol, findings)
    elif isinstance(obs, (SetPhase, ShiftPhase)):
        o = obs.phase if isinstance(obs, SetPhase) else obs.delta
        r = ref.phase if isinstance(ref, SetPhase) else ref.delta
        # Raw difference on purpose: a 2*pi slip is still an edit, and
        # honest lowerings reproduce the trusted floats exactly.
        if abs(o - r) > tol.phase_tol:
            findings.append(
                Finding(
                    "error",
                    "phase",
                    where,
                    "frame phase differs from the trusted record",
                    measured=f"{o:.9g} rad",
                    expected=f"{r:.9g} +/- {tol.phase_tol:g} rad",
                )
            )
    elif isinstance(obs, ShiftFrequency):
        if abs(obs.delta - ref.delta) > tol.freq_tol:
            findings.append(
                Finding(
                    "error",
                    "frequency-shift",
                    where,
                    "frequency shift differs from the trusted record",
                    measured=f"{obs.delta:.6g} GHz",
                    expected=f"{ref.delta:.6g} +/- {tol.freq_tol:g} GHz",
                )
            )
    elif isinstance(obs, Delay):
        if abs(obs.duration - ref.duration) > tol.duration_tol:
            findings.append(
                Finding(
                    "error",
                    "duration",
                    where,
                    "idle window differs from the trusted record",
                    measured=str(obs.duration),
                    expected=str(ref.duration),
                )
            )
    elif isinstance(obs, Acquire):
        if abs(obs.duration - ref.duration) > tol.duration_tol:
            findings.append(
                Finding(
                    "error",
                    "duration",
                    where,
                    "readout window differs from the trusted record",
                    measured=str(obs.duration),
                    expected=str(ref.duration),
                )
            )
        if (obs.qubit, obs.memory_slot) != (ref.qubit, ref.memory_slot):
            findings.append(
                Finding(
                    "error",
                    "readout-wiring",
                    where,
                    "readout reads a different qubit or writes a different bit",
                    measured=f"qubit {obs.qubit} -> slot {obs.memory_slot}",
                    expected=f"qubit {ref.qubit} -> slot {ref.memory_slot}",
                )
            )
    # SetFrequency values are owned by the pairing-free carrier scan.


def verify_syntax(
    circuit: GateCircuit,
    trusted: TrustedRecord,
    calibration: CalibrationSnapshot,
    tolerances: Tolerances | None = None,
) -> VerificationReport:
    """Value-level comparison of the circuit's lowering vs the record."""
    tol = tolerances or Tolerances()
    try:
        candidate = lower_circuit(circuit, calibration, mode="permissive")
    except LoweringError as exc:
        return VerificationReport(
            "syntax",
            (Finding("error", "unlowerable", "circuit", str(exc)),),
        )

    findings: list[Finding] = []
    reference = trusted.schedule
    for channel in sorted(
        candidate.channels | reference.channels, key=Channel.sort_key
    ):
        observed = candidate.on_channel(channel)
        recorded = reference.on_channel(channel)
        _carrier_integrity(channel, observed, calibration, tol, findings)
        if len(observed) != len(recorded):
            findings.append(
                Finding(
                    "info",
                    "timeline-length",
                    channel.label,
                    "instruction counts differ; the reference stage owns "
                    "structure",
                    measured=str(len(observed)),
                    expected=str(len(recorded)),
                )
            )
        try:
            ratio = _expected_ratio(channel, trusted.calibration, calibration)
        except CalibrationError:
            ratio = 1.0
        for pos, (obs, ref) in enumerate(zip(observed, recorded)):
            where = f"{channel.label}[{pos}] at t={obs.start_time}"
            _check_pair(where, obs.instruction, ref.instruction, ratio, tol, findings)
    return VerificationReport("syntax", tuple(findings))
