"""Synthetic hardware truth: per-qubit physics and native pulse templates.

Units: frequencies in GHz, t1/t2 in microseconds, dt in seconds per sample,
rabi_scale and cr_scale in radians of rotation per second at unit envelope
amplitude. Rotation angle of a pulse is scale * amp * sum|s_k| * dt, which
keeps calibration exactly invariant under vendor amplitude rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from pulseguard.core.channels import Channel, acquire, control, drive, measure
from pulseguard.core.errors import CalibrationError
from pulseguard.core.waveforms import ParametricWaveform


@dataclass(frozen=True, slots=True)
class TimingConstraints:
    dt: float = 0.222e-9
    granularity: int = 16
    pulse_alignment: int = 16
    acquire_alignment: int = 16

    def __post_init__(self):
        if self.dt <= 0 or not math.isfinite(self.dt):
            raise CalibrationError(f"dt must be > 0 seconds, got {self.dt}")
        for name in ("granularity", "pulse_alignment", "acquire_alignment"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise CalibrationError(f"{name} must be a positive int, got {value!r}")

    @property
    def alignment(self) -> int:
        """The start-time grid: lcm of pulse and acquire alignment."""
        return math.lcm(self.pulse_alignment, self.acquire_alignment)


@dataclass(frozen=True, slots=True)
class QubitCalibration:
    """Physics and single-qubit templates for one transmon.

    t1/t2 are in microseconds; frequency and anharmonicity in GHz.
    """

    frequency: float
    anharmonicity: float
    t1: float
    t2: float
    rabi_scale: float
    x_template: ParametricWaveform
    sx_template: ParametricWaveform
    measure_template: ParametricWaveform
    readout_duration: int

    def __post_init__(self):
        if self.frequency <= 0:
            raise CalibrationError(f"qubit frequency must be > 0, got {self.frequency}")
        if self.anharmonicity >= 0:
            raise CalibrationError("anharmonicity must be negative (GHz)")
        if self.t1 <= 0 or self.t2 <= 0:
            raise CalibrationError("t1 and t2 must be positive (microseconds)")
        if self.t2 > 2 * self.t1 + 1e-12:
            raise CalibrationError(f"t2 <= 2*t1 violated: t1={self.t1}, t2={self.t2}")
        if self.rabi_scale <= 0:
            raise CalibrationError("rabi_scale must be > 0")
        if self.readout_duration < 1:
            raise CalibrationError("readout_duration must be >= 1 sample")


@dataclass(frozen=True, slots=True)
class PairCalibration:
    """Cross-resonance template for one directed coupling (control, target)."""

    pair: tuple[int, int]
    frequency: float
    cr_scale: float
    cr_template: ParametricWaveform

    def __post_init__(self):
        object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))
        if self.pair[0] == self.pair[1]:
            raise CalibrationError("coupling pair must be two distinct qubits")
        if self.frequency <= 0:
            raise CalibrationError("control-channel frequency must be > 0")
        if self.cr_scale <= 0:
            raise CalibrationError("cr_scale must be > 0")


@dataclass(frozen=True, slots=True)
class CalibrationSnapshot:
    """Full device description at one point in time."""

    timestamp: float
    timing: TimingConstraints
    qubits: tuple[QubitCalibration, ...]
    pairs: tuple[PairCalibration, ...] = ()
    forbidden_band: tuple[float, float] = (2.0, 3.0)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "pairs", tuple(self.pairs))
        band = (float(self.forbidden_band[0]), float(self.forbidden_band[1]))
        object.__setattr__(self, "forbidden_band", band)
        if not self.qubits:
            raise CalibrationError("snapshot needs at least one qubit")
        if band[0] >= band[1]:
            raise CalibrationError(f"forbidden band must be an interval, got {band}")
        n = len(self.qubits)
        seen = set()
        for pc in self.pairs:
            c, t = pc.pair
            if not (0 <= c < n and 0 <= t < n):
                raise CalibrationError(f"pair {pc.pair} outside the {n}-qubit device")
            if pc.pair in seen:
                raise CalibrationError(f"duplicate coupling pair {pc.pair}")
            seen.add(pc.pair)

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def coupling(self) -> tuple[tuple[int, int], ...]:
        return tuple(pc.pair for pc in self.pairs)

    @property
    def dt(self) -> float:
        return self.timing.dt

    def qubit(self, q: int) -> QubitCalibration:
        if not 0 <= q < self.num_qubits:
            raise CalibrationError(f"no qubit {q} on this {self.num_qubits}-qubit device")
        return self.qubits[q]

    def pair_calibration(self, ordinal: int) -> PairCalibration:
        if not 0 <= ordinal < len(self.pairs):
            raise CalibrationError(f"no coupling pair with ordinal {ordinal}")
        return self.pairs[ordinal]

    def pair_ordinal(self, pair: tuple[int, int]) -> int:
        for i, pc in enumerate(self.pairs):
            if pc.pair == tuple(pair):
                return i
        raise CalibrationError(f"device has no directed coupling {pair}")

    def has_channel(self, channel: Channel) -> bool:
        if channel.kind == "control":
            return channel.index < len(self.pairs)
        return channel.index < self.num_qubits

    def channel_qubits(self, channel: Channel) -> tuple[int, ...]:
        """Device qubits a channel acts on or reads out."""
        if not self.has_channel(channel):
            raise CalibrationError(f"channel {channel} does not exist on this device")
        if channel.kind == "control":
            return self.pairs[channel.index].pair
        return (channel.index,)

    def channel_frequency(self, channel: Channel) -> float:
        """Calibrated frame frequency for a channel (GHz)."""
        if not self.has_channel(channel):
            raise CalibrationError(f"channel {channel} does not exist on this device")
        if channel.kind == "control":
            return self.pairs[channel.index].frequency
        if channel.kind == "acquire":
            raise CalibrationError("acquire channels carry no frame")
        return self.qubits[channel.index].frequency

    def incident_controls(self, q: int) -> tuple[Channel, ...]:
        """Control channels whose coupling pair contains qubit q."""
        return tuple(
            control(i) for i, pc in enumerate(self.pairs) if q in pc.pair
        )

    def drive_channel(self, q: int) -> Channel:
        self.qubit(q)
        return drive(q)

    def measure_channel(self, q: int) -> Channel:
        self.qubit(q)
        return measure(q)

    def acquire_channel(self, q: int) -> Channel:
        self.qubit(q)
        return acquire(q)

    def in_forbidden_band(self, frequency: float) -> bool:
        lo, hi = self.forbidden_band
        return lo <= frequency <= hi

    def with_timestamp(self, timestamp: float) -> "CalibrationSnapshot":
        return replace(self, timestamp=timestamp)
