"""Command line interface and end-to-end demo scenarios."""

from pulseguard.cli.demos import (
    TELEPORT_VARIANTS,
    attack_grover,
    build_grover_circuit,
    build_teleport_circuit,
    grover_device,
    run_flip,
    run_grover,
    run_teleport,
    teleport_device,
)
from pulseguard.cli.main import main

__all__ = [
    "TELEPORT_VARIANTS",
    "attack_grover",
    "build_grover_circuit",
    "build_teleport_circuit",
    "grover_device",
    "main",
    "run_flip",
    "run_grover",
    "run_teleport",
    "teleport_device",
]
