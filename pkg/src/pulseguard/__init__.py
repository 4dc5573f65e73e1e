"""Pulse-level quantum control toolkit.

Compiles gate circuits to device pulse schedules, simulates pulse semantics
(frames, detuning, cross-resonance, T1/T2 decay, projective measurement),
injects channel/pulse tampering passes, and verifies schedules against a
content-addressed trusted store.
"""

__version__ = "0.1.0"

from pulseguard._kernels import KERNEL_BACKEND

__all__ = ["__version__", "KERNEL_BACKEND"]
