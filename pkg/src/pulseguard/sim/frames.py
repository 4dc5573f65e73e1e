"""Per-channel oscillator frames.

A frame stores its carrier frequency and the phase it had at the anchor
sample, both expressed relative to the transition frequency the channel
addresses. Phase at any later sample follows from the detuning, so frame
updates are O(1) and nothing advances sample by sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class Frame:
    """Oscillator state for one channel.

    Attributes:
        frequency: Carrier frequency in GHz.
        reference: Transition frequency the channel addresses, GHz. The
            stored phase is relative to this rotating frame.
        phase: Phase in radians at the anchor sample.
        anchor: Sample index where phase was last materialized.
    """

    frequency: float
    reference: float
    phase: float = 0.0
    anchor: int = 0

    def detune_angle(self, dt: float) -> float:
        """Phase advance per sample relative to the reference frame, rad."""
        return 2.0 * math.pi * (self.frequency - self.reference) * 1.0e9 * dt

    def phase_at(self, time: int, dt: float) -> float:
        return self.phase + self.detune_angle(dt) * (time - self.anchor)

    def materialize(self, time: int, dt: float) -> None:
        """Fold the frequency law into the stored phase at `time`."""
        self.phase = self.phase_at(time, dt)
        self.anchor = time

    def set_frequency(self, time: int, frequency: float, dt: float) -> None:
        self.materialize(time, dt)
        self.frequency = frequency

    def shift_frequency(self, time: int, delta: float, dt: float) -> None:
        self.materialize(time, dt)
        self.frequency += delta

    def set_phase(self, time: int, phase: float, dt: float) -> None:
        self.materialize(time, dt)
        self.phase = phase

    def shift_phase(self, time: int, delta: float, dt: float) -> None:
        self.materialize(time, dt)
        self.phase += delta
