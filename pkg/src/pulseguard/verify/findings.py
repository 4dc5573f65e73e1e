"""Verdict types shared by all verification stages."""

from __future__ import annotations

from dataclasses import dataclass

from pulseguard.core import serialize
from pulseguard.core.errors import SchemaError

SEVERITIES = ("info", "warning", "error")
STAGES = ("channel", "reference", "syntax", "semantics")


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Acceptance windows for the comparison stages.

    freq_tol is in GHz, phase_tol in radians, duration_tol in samples.
    amp_rel_tol bounds both the complex amplitude ratio and the pointwise
    deviation of peak-normalized envelopes. fidelity_threshold is the
    minimum |Tr(U_actual^dag U_declared)| / dim for the semantic stage.
    """

    freq_tol: float = 1e-3
    phase_tol: float = 1e-6
    amp_rel_tol: float = 0.02
    duration_tol: int = 0
    fidelity_threshold: float = 0.99

    def __post_init__(self):
        if self.freq_tol < 0 or self.phase_tol < 0 or self.amp_rel_tol < 0:
            raise ValueError("tolerances must be >= 0")
        if self.duration_tol < 0:
            raise ValueError("duration_tol must be >= 0 samples")
        if not 0 < self.fidelity_threshold <= 1:
            raise ValueError("fidelity_threshold must be in (0, 1]")


@dataclass(frozen=True, slots=True)
class Finding:
    """One observation made by a verification stage.

    Only `error` findings block execution; `info` records context (an
    unverifiable gate, a mismatch another stage owns) and `warning` flags
    oddities worth a human look.
    """

    severity: str
    kind: str
    location: str
    explanation: str
    measured: str = ""
    expected: str = ""

    def __post_init__(self):
        if self.severity not in SEVERITIES:
            raise ValueError(f"severity must be one of {SEVERITIES}")


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """Everything one stage had to say about a circuit."""

    stage: str
    findings: tuple[Finding, ...] = ()

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"stage must be one of {STAGES}")
        object.__setattr__(self, "findings", tuple(self.findings))

    @property
    def passed(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")


def _decode_finding(obj: dict, path: str) -> Finding:
    for name in ("severity", "kind", "location", "explanation", "measured", "expected"):
        if not isinstance(obj.get(name), str):
            raise SchemaError(f"{path}/{name}", f"expected a string, got {obj.get(name)!r}")
    try:
        return Finding(
            obj["severity"], obj["kind"], obj["location"],
            obj["explanation"], obj["measured"], obj["expected"],
        )
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _decode_report(obj: dict, path: str) -> VerificationReport:
    stage = obj.get("stage")
    if not isinstance(stage, str):
        raise SchemaError(f"{path}/stage", "expected a string")
    raw = obj.get("findings")
    if not isinstance(raw, list):
        raise SchemaError(f"{path}/findings", "expected a list")
    findings = []
    for i, f in enumerate(raw):
        decoded = serialize.decode(f, f"{path}/findings/{i}")
        if not isinstance(decoded, Finding):
            raise SchemaError(f"{path}/findings/{i}", "expected a finding")
        findings.append(decoded)
    try:
        return VerificationReport(stage, tuple(findings))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


serialize.register(Finding, "finding", _decode_finding)
serialize.register(VerificationReport, "verification_report", _decode_report)
