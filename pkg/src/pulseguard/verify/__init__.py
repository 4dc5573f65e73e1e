"""Pulse-level verification: channel, reference, syntax, semantic stages."""

from pulseguard.core.errors import QuarantineError, StoreError
from pulseguard.verify.channels import verify_channels
from pulseguard.verify.findings import (
    SEVERITIES,
    STAGES,
    Finding,
    Tolerances,
    VerificationReport,
)
from pulseguard.verify.pipeline import pipeline_passed, verify_pipeline
from pulseguard.verify.reference import verify_reference
from pulseguard.verify.semantics import verify_semantics
from pulseguard.verify.store import TrustedRecord, fetch, make_record, publish
from pulseguard.verify.syntax import verify_syntax

__all__ = [
    "SEVERITIES",
    "STAGES",
    "Finding",
    "QuarantineError",
    "StoreError",
    "Tolerances",
    "TrustedRecord",
    "VerificationReport",
    "fetch",
    "make_record",
    "pipeline_passed",
    "publish",
    "verify_channels",
    "verify_pipeline",
    "verify_reference",
    "verify_semantics",
    "verify_syntax",
]
