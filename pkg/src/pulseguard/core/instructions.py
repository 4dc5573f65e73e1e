"""Pulse instructions.

Two families:
  * occupying — Play, Delay, Acquire reserve a channel for a time interval;
  * frame — Set/ShiftFrequency and Set/ShiftPhase are instantaneous
    bookkeeping updates to the channel's software frame.

Acquire addresses a qubit rather than a channel and implicitly occupies
that qubit's acquire channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pulseguard.core.channels import Channel, acquire
from pulseguard.core.errors import PulseError
from pulseguard.core.waveforms import Waveform


def _check_finite(value: float, what: str) -> None:
    if not math.isfinite(value):
        raise PulseError(f"{what} must be finite, got {value!r}")


def _check_duration(value: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise PulseError(f"{what} must be an int >= 0, got {value!r}")


@dataclass(frozen=True, slots=True)
class Play:
    """Emit a waveform on a drive, control, or measure channel."""

    channel: Channel
    waveform: Waveform

    def __post_init__(self):
        if self.channel.kind == "acquire":
            raise PulseError("cannot Play on an acquire channel")


@dataclass(frozen=True, slots=True)
class Delay:
    """Hold a channel idle for `duration` samples."""

    channel: Channel
    duration: int

    def __post_init__(self):
        _check_duration(self.duration, "delay duration")


@dataclass(frozen=True, slots=True)
class SetFrequency:
    """Retune a channel's frame to an absolute frequency in GHz."""

    channel: Channel
    frequency: float

    def __post_init__(self):
        object.__setattr__(self, "frequency", float(self.frequency))
        _check_finite(self.frequency, "frequency")
        if self.frequency <= 0:
            raise PulseError(f"frequency must be > 0 GHz, got {self.frequency}")
        if self.channel.kind == "acquire":
            raise PulseError("acquire channels carry no frame")


@dataclass(frozen=True, slots=True)
class ShiftFrequency:
    """Offset a channel's frame frequency by `delta` GHz."""

    channel: Channel
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "delta", float(self.delta))
        _check_finite(self.delta, "frequency delta")
        if self.channel.kind == "acquire":
            raise PulseError("acquire channels carry no frame")


@dataclass(frozen=True, slots=True)
class SetPhase:
    """Set a channel's frame phase to an absolute value in radians."""

    channel: Channel
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "phase", float(self.phase))
        _check_finite(self.phase, "phase")
        if self.channel.kind == "acquire":
            raise PulseError("acquire channels carry no frame")


@dataclass(frozen=True, slots=True)
class ShiftPhase:
    """Advance a channel's frame phase by `delta` radians (virtual Z)."""

    channel: Channel
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "delta", float(self.delta))
        _check_finite(self.delta, "phase delta")
        if self.channel.kind == "acquire":
            raise PulseError("acquire channels carry no frame")


@dataclass(frozen=True, slots=True)
class Acquire:
    """Project a qubit and record the outcome into a memory slot."""

    qubit: int
    duration: int
    memory_slot: int

    def __post_init__(self):
        if not isinstance(self.qubit, int) or self.qubit < 0:
            raise PulseError(f"qubit must be an int >= 0, got {self.qubit!r}")
        _check_duration(self.duration, "acquire duration")
        if not isinstance(self.memory_slot, int) or self.memory_slot < 0:
            raise PulseError(f"memory slot must be an int >= 0, got {self.memory_slot!r}")

    @property
    def channel(self) -> Channel:
        return acquire(self.qubit)


Instruction = Play | Delay | SetFrequency | ShiftFrequency | SetPhase | ShiftPhase | Acquire

FRAME_INSTRUCTIONS = (SetFrequency, ShiftFrequency, SetPhase, ShiftPhase)
OCCUPYING_INSTRUCTIONS = (Play, Delay, Acquire)


def instruction_channel(instruction: Instruction) -> Channel:
    return instruction.channel


def instruction_duration(instruction: Instruction) -> int:
    if isinstance(instruction, Play):
        return instruction.waveform.duration
    if isinstance(instruction, (Delay, Acquire)):
        return instruction.duration
    return 0


def is_occupying(instruction: Instruction) -> bool:
    return isinstance(instruction, OCCUPYING_INSTRUCTIONS)
