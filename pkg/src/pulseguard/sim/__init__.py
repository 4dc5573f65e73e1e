"""Pulse-level simulator: exact unitaries, decoherence, and shot sampling."""

from pulseguard.sim.density import DensityState
from pulseguard.sim.engine import (
    ShotResult,
    SimOptions,
    simulate_density,
    simulate_shots,
    simulate_unitary,
)
from pulseguard.sim.frames import Frame
from pulseguard.sim.noise import amplitude_damping, idle_kraus, phase_damping

__all__ = [
    "DensityState",
    "Frame",
    "ShotResult",
    "SimOptions",
    "amplitude_damping",
    "idle_kraus",
    "phase_damping",
    "simulate_density",
    "simulate_shots",
    "simulate_unitary",
]
