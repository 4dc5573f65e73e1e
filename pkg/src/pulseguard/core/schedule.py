"""Time-stamped pulse schedules with canonical entry ordering.

Entries are kept sorted by (start_time, channel, frame-before-occupying,
payload) at construction, so two schedules built in different orders but
holding the same content are equal values and serialize to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Iterable, Iterator

from pulseguard.core.channels import Channel
from pulseguard.core.errors import PulseError
from pulseguard.core.instructions import (
    Acquire,
    Instruction,
    Play,
    instruction_channel,
    instruction_duration,
    is_occupying,
)
from pulseguard.core.waveforms import ParametricWaveform, SampledWaveform


@dataclass(frozen=True, slots=True)
class ScheduleEntry:
    start_time: int
    instruction: Instruction

    def __post_init__(self):
        if not isinstance(self.start_time, int) or isinstance(self.start_time, bool):
            raise PulseError(f"start_time must be an int, got {self.start_time!r}")
        if self.start_time < 0:
            raise PulseError(f"start_time must be >= 0, got {self.start_time}")

    @property
    def channel(self) -> Channel:
        return instruction_channel(self.instruction)

    @property
    def duration(self) -> int:
        return instruction_duration(self.instruction)

    @property
    def end_time(self) -> int:
        return self.start_time + self.duration


def _waveform_key(waveform) -> tuple:
    if isinstance(waveform, SampledWaveform):
        return ("sampled", tuple((s.real, s.imag) for s in waveform.samples))
    assert isinstance(waveform, ParametricWaveform)
    return (
        waveform.shape,
        waveform.duration,
        waveform.amp.real,
        waveform.amp.imag,
        waveform.sigma,
        waveform.beta,
        waveform.width,
    )


def _payload_key(instruction: Instruction) -> tuple:
    parts: list = [type(instruction).__name__]
    for field in fields(instruction):
        value = getattr(instruction, field.name)
        if isinstance(value, Channel):
            continue
        if isinstance(value, (SampledWaveform, ParametricWaveform)):
            parts.append(_waveform_key(value))
        else:
            parts.append(value)
    # None sorts nowhere; stringify mixed parts deterministically.
    return tuple(repr(p) for p in parts)


def _entry_key(entry: ScheduleEntry) -> tuple:
    return (
        entry.start_time,
        entry.channel.sort_key(),
        1 if is_occupying(entry.instruction) else 0,
        _payload_key(entry.instruction),
    )


@dataclass(frozen=True, slots=True)
class Schedule:
    """Immutable, canonically ordered pulse program."""

    entries: tuple[ScheduleEntry, ...] = ()

    def __post_init__(self):
        normalized = tuple(sorted(self.entries, key=_entry_key))
        object.__setattr__(self, "entries", normalized)

    @classmethod
    def build(cls, items: Iterable[tuple[int, Instruction]]) -> "Schedule":
        return cls(tuple(ScheduleEntry(t, i) for t, i in items))

    def __iter__(self) -> Iterator[ScheduleEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def duration(self) -> int:
        return max((e.end_time for e in self.entries), default=0)

    @property
    def channels(self) -> frozenset[Channel]:
        return frozenset(e.channel for e in self.entries)

    def on_channel(self, channel: Channel) -> tuple[ScheduleEntry, ...]:
        return tuple(e for e in self.entries if e.channel == channel)

    def shifted(self, offset: int) -> "Schedule":
        """Same content displaced by `offset` samples (result times >= 0)."""
        return Schedule(
            tuple(ScheduleEntry(e.start_time + offset, e.instruction) for e in self.entries)
        )

    def merged(self, *others: "Schedule") -> "Schedule":
        merged = list(self.entries)
        for other in others:
            merged.extend(other.entries)
        return Schedule(tuple(merged))


@dataclass(frozen=True, slots=True)
class Violation:
    """One timing or overlap rule breach, locatable by entry index."""

    kind: str
    channel: Channel
    entries: tuple[int, ...]
    message: str


def validate_timing(schedule: Schedule, constraints) -> list[Violation]:
    """Check start alignment and Play duration granularity.

    Every entry's start time must be a multiple of
    lcm(pulse_alignment, acquire_alignment); every Play's duration must be
    a multiple of the granularity. Returns one violation per breach.
    """
    alignment = math.lcm(constraints.pulse_alignment, constraints.acquire_alignment)
    violations: list[Violation] = []
    for idx, entry in enumerate(schedule.entries):
        if entry.start_time % alignment != 0:
            violations.append(
                Violation(
                    "start-alignment",
                    entry.channel,
                    (idx,),
                    f"start {entry.start_time} is not a multiple of {alignment}",
                )
            )
        if isinstance(entry.instruction, Play):
            dur = entry.duration
            if dur % constraints.granularity != 0:
                violations.append(
                    Violation(
                        "duration-granularity",
                        entry.channel,
                        (idx,),
                        f"duration {dur} is not a multiple of {constraints.granularity}",
                    )
                )
    return violations


def check_overlap(schedule: Schedule) -> list[Violation]:
    """Report every pair of overlapping occupying intervals per channel."""
    by_channel: dict[Channel, list[int]] = {}
    for idx, entry in enumerate(schedule.entries):
        if is_occupying(entry.instruction):
            by_channel.setdefault(entry.channel, []).append(idx)
    violations: list[Violation] = []
    for channel, indices in sorted(by_channel.items(), key=lambda kv: kv[0].sort_key()):
        indices.sort(key=lambda i: schedule.entries[i].start_time)
        for a_pos, a_idx in enumerate(indices):
            a = schedule.entries[a_idx]
            for b_idx in indices[a_pos + 1 :]:
                b = schedule.entries[b_idx]
                if b.start_time >= a.end_time:
                    break
                if a.start_time < b.end_time and b.start_time < a.end_time:
                    violations.append(
                        Violation(
                            "overlap",
                            channel,
                            (a_idx, b_idx),
                            f"[{a.start_time},{a.end_time}) overlaps "
                            f"[{b.start_time},{b.end_time}) on {channel}",
                        )
                    )
    return violations


def acquire_entries(schedule: Schedule) -> list[ScheduleEntry]:
    return [e for e in schedule.entries if isinstance(e.instruction, Acquire)]
