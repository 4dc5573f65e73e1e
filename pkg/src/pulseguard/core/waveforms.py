"""Pulse envelopes: literal sample arrays and parametric shapes.

Amplitudes are dimensionless, bounded by 1 in magnitude (hardware full
scale). A parametric waveform materializes to exactly `duration` complex
samples; time is integer samples throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from pulseguard.core.errors import PulseError

PARAMETRIC_SHAPES = ("gaussian", "drag", "gaussian_square", "constant")


def _check_finite_complex(value: complex, what: str) -> None:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise PulseError(f"{what} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class SampledWaveform:
    """Envelope given directly as complex samples, |s_k| <= 1."""

    samples: tuple[complex, ...]

    def __post_init__(self):
        if len(self.samples) < 1:
            raise PulseError("sampled waveform needs at least 1 sample")
        object.__setattr__(
            self, "samples", tuple(complex(s) for s in self.samples)
        )
        for k, s in enumerate(self.samples):
            _check_finite_complex(s, f"sample {k}")
            if abs(s) > 1.0 + 1e-12:
                raise PulseError(f"sample {k} exceeds unit amplitude: |{s}| > 1")

    @property
    def duration(self) -> int:
        return len(self.samples)

    @property
    def shape(self) -> str:
        return "sampled"

    def materialize(self) -> np.ndarray:
        return np.array(self.samples, dtype=np.complex128)


@dataclass(frozen=True, slots=True)
class ParametricWaveform:
    """Named envelope shape with parameters.

    Shapes:
        gaussian: amp * exp(-(k-c)^2 / (2 sigma^2)), c = (duration-1)/2.
        drag: gaussian plus a derivative quadrature term scaled by beta.
        gaussian_square: gaussian rise, flat top of `width` samples,
            gaussian fall; rise and fall split the remaining duration.
        constant: amp everywhere.

    sigma is in samples; beta is dimensionless (drag only); width is in
    samples (gaussian_square only).
    """

    shape: str
    duration: int
    amp: complex
    sigma: float | None = None
    beta: float | None = None
    width: int | None = None

    def __post_init__(self):
        if self.shape not in PARAMETRIC_SHAPES:
            raise PulseError(f"unknown waveform shape {self.shape!r}")
        if not isinstance(self.duration, int) or self.duration < 1:
            raise PulseError(f"duration must be a positive int, got {self.duration!r}")
        object.__setattr__(self, "amp", complex(self.amp))
        _check_finite_complex(self.amp, "amp")
        if abs(self.amp) > 1.0 + 1e-12:
            raise PulseError(f"|amp| must be <= 1, got {abs(self.amp)}")
        needs_sigma = self.shape in ("gaussian", "drag", "gaussian_square")
        if needs_sigma:
            if self.sigma is None or not math.isfinite(self.sigma) or self.sigma <= 0:
                raise PulseError(f"{self.shape} needs sigma > 0, got {self.sigma!r}")
        elif self.sigma is not None:
            raise PulseError("constant shape takes no sigma")
        if self.shape == "drag":
            if self.beta is None or not math.isfinite(self.beta):
                raise PulseError("drag needs a finite beta")
        elif self.beta is not None:
            raise PulseError(f"{self.shape} takes no beta")
        if self.shape == "gaussian_square":
            if self.width is None or not isinstance(self.width, int):
                raise PulseError("gaussian_square needs an integer width")
            if not 0 <= self.width <= self.duration:
                raise PulseError(
                    f"width must lie in [0, duration], got {self.width}/{self.duration}"
                )
        elif self.width is not None:
            raise PulseError(f"{self.shape} takes no width")

    def materialize(self) -> np.ndarray:
        k = np.arange(self.duration, dtype=np.float64)
        if self.shape == "constant":
            return np.full(self.duration, self.amp, dtype=np.complex128)
        if self.shape in ("gaussian", "drag"):
            center = (self.duration - 1) / 2.0
            g = np.exp(-((k - center) ** 2) / (2.0 * self.sigma**2))
            if self.shape == "gaussian":
                return (self.amp * g).astype(np.complex128)
            dg = -(k - center) / (self.sigma**2) * g
            return (self.amp * (g + 1j * self.beta * dg)).astype(np.complex128)
        # gaussian_square: edges taken from a gaussian centered on each ramp end.
        ramp = (self.duration - self.width) / 2.0
        env = np.ones(self.duration, dtype=np.float64)
        rising = k < ramp
        falling = k >= ramp + self.width
        env[rising] = np.exp(-((k[rising] - ramp) ** 2) / (2.0 * self.sigma**2))
        env[falling] = np.exp(
            -((k[falling] - (ramp + self.width)) ** 2) / (2.0 * self.sigma**2)
        )
        return (self.amp * env).astype(np.complex128)

    def with_amp(self, amp: complex) -> "ParametricWaveform":
        """Same shape, different amplitude."""
        return ParametricWaveform(
            self.shape, self.duration, amp, self.sigma, self.beta, self.width
        )


Waveform = SampledWaveform | ParametricWaveform


def waveform_area(waveform: Waveform) -> float:
    """Sum of |s_k| over the materialized envelope (in samples)."""
    return float(np.abs(waveform.materialize()).sum())


def waveform_phase(waveform: Waveform) -> float:
    """arg(amp) for parametric shapes, phase of the peak sample otherwise."""
    if isinstance(waveform, ParametricWaveform):
        return cmath.phase(waveform.amp)
    samples = waveform.materialize()
    return cmath.phase(samples[int(np.argmax(np.abs(samples)))])
