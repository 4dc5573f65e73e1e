"""Circuit-to-schedule compilation and channel binding."""

from pulseguard.lowering.binding import (
    MODES,
    bind_schedule,
    default_target,
    resolve_binding,
    template_channels,
    used_channels,
)
from pulseguard.lowering.compose import gate_from_circuit, project_calibration
from pulseguard.lowering.lower import lower_circuit, lower_gate

__all__ = [
    "MODES",
    "bind_schedule",
    "default_target",
    "gate_from_circuit",
    "lower_circuit",
    "lower_gate",
    "project_calibration",
    "resolve_binding",
    "template_channels",
    "used_channels",
]
