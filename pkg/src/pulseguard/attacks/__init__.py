"""Tamper passes, flip gadgets, and the records that undo them."""

from pulseguard.attacks.gadgets import FLIP_KINDS, build_flip_gadget
from pulseguard.attacks.passes import (
    frequency_mismatch,
    phase_mismatch,
    qubit_block,
    qubit_plunder,
    qubit_reorder,
    timing_mismatch,
    waveform_mismatch,
)
from pulseguard.attacks.records import TamperRecord, snapshot

__all__ = [
    "FLIP_KINDS",
    "TamperRecord",
    "build_flip_gadget",
    "frequency_mismatch",
    "phase_mismatch",
    "qubit_block",
    "qubit_plunder",
    "qubit_reorder",
    "snapshot",
    "timing_mismatch",
    "waveform_mismatch",
]
