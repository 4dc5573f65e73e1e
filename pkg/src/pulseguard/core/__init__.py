"""Shared data model: channels, waveforms, schedules, gates, calibrations."""

from pulseguard.core.calibration import (
    CalibrationSnapshot,
    PairCalibration,
    QubitCalibration,
    TimingConstraints,
)
from pulseguard.core.channels import (
    CHANNEL_KINDS,
    Channel,
    acquire,
    control,
    drive,
    measure,
)
from pulseguard.core.errors import (
    AttackError,
    BindingError,
    CalibrationError,
    LoweringError,
    OverlapError,
    PulseError,
    QuarantineError,
    SchemaError,
    SimulationError,
    StoreError,
)
from pulseguard.core.gates import (
    NATIVE_GATES,
    CustomGate,
    GateCircuit,
    GateOp,
)
from pulseguard.core.instructions import (
    Acquire,
    Delay,
    Instruction,
    Play,
    SetFrequency,
    SetPhase,
    ShiftFrequency,
    ShiftPhase,
    instruction_channel,
    instruction_duration,
    is_occupying,
)
from pulseguard.core.matrices import (
    CX_MAT,
    CZ_MAT,
    H_MAT,
    SX_MAT,
    X_MAT,
    Y_MAT,
    Z_MAT,
    circuit_unitary,
    embed,
    fidelity,
    gate_matrix,
    rx,
    rz,
    u3,
)
from pulseguard.core.schedule import (
    Schedule,
    ScheduleEntry,
    Violation,
    check_overlap,
    validate_timing,
)
from pulseguard.core.serialize import (
    canonical_serialize,
    content_hash,
    decode,
    deserialize,
    encode,
    gate_level_hash,
    gate_level_view,
    hash_bytes,
    register,
)
from pulseguard.core.synth import MAX_QUBITS, drift_snapshot, synthesize_snapshot
from pulseguard.core.waveforms import (
    ParametricWaveform,
    SampledWaveform,
    Waveform,
    waveform_area,
    waveform_phase,
)

__all__ = [
    "CHANNEL_KINDS",
    "CX_MAT",
    "CZ_MAT",
    "H_MAT",
    "MAX_QUBITS",
    "NATIVE_GATES",
    "SX_MAT",
    "X_MAT",
    "Y_MAT",
    "Z_MAT",
    "Acquire",
    "AttackError",
    "BindingError",
    "CalibrationError",
    "CalibrationSnapshot",
    "Channel",
    "CustomGate",
    "Delay",
    "GateCircuit",
    "GateOp",
    "Instruction",
    "LoweringError",
    "OverlapError",
    "PairCalibration",
    "ParametricWaveform",
    "Play",
    "PulseError",
    "QuarantineError",
    "QubitCalibration",
    "SampledWaveform",
    "Schedule",
    "ScheduleEntry",
    "SchemaError",
    "SetFrequency",
    "SetPhase",
    "ShiftFrequency",
    "ShiftPhase",
    "SimulationError",
    "StoreError",
    "TimingConstraints",
    "Violation",
    "Waveform",
    "acquire",
    "canonical_serialize",
    "check_overlap",
    "circuit_unitary",
    "content_hash",
    "control",
    "decode",
    "deserialize",
    "drift_snapshot",
    "drive",
    "embed",
    "encode",
    "fidelity",
    "gate_level_hash",
    "gate_level_view",
    "gate_matrix",
    "hash_bytes",
    "instruction_channel",
    "instruction_duration",
    "is_occupying",
    "measure",
    "register",
    "rx",
    "rz",
    "synthesize_snapshot",
    "u3",
    "validate_timing",
    "waveform_area",
    "waveform_phase",
]
