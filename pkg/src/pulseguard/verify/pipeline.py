"""The four-stage verification pipeline, cheapest check first.

Stage order is attribution order: a channel-level hit (plunder, block)
explains everything downstream, so the pipeline stops there; otherwise
all remaining stages run and report side by side, structure (reference)
separated from values (syntax) separated from physics (semantics).
"""

from __future__ import annotations

from pulseguard.core import CalibrationSnapshot, GateCircuit
from pulseguard.verify.channels import verify_channels
from pulseguard.verify.findings import Tolerances, VerificationReport
from pulseguard.verify.reference import verify_reference
from pulseguard.verify.semantics import verify_semantics
from pulseguard.verify.store import TrustedRecord
from pulseguard.verify.syntax import verify_syntax

__all__ = ["verify_pipeline", "pipeline_passed"]


def verify_pipeline(
    circuit: GateCircuit,
    trusted: TrustedRecord,
    calibration: CalibrationSnapshot,
    tolerances: Tolerances | None = None,
) -> tuple[VerificationReport, ...]:
    """Run all stages against a trusted record; see `pipeline_passed`."""
    tol = tolerances or Tolerances()
    channel = verify_channels(circuit, calibration, tol)
    if not channel.passed:
        return (channel,)
    return (
        channel,
        verify_reference(circuit, trusted, calibration, tol),
        verify_syntax(circuit, trusted, calibration, tol),
        verify_semantics(circuit, calibration, tol),
    )


def pipeline_passed(reports: tuple[VerificationReport, ...]) -> bool:
    return all(report.passed for report in reports)
