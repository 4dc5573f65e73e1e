"""Gate-level IR: native operations, custom pulse-backed gates, circuits.

A custom gate's schedule is written over template channels: drive slot d_i
refers to the gate's i-th declared qubit, control slot u_j to its j-th
declared adjacent pair, and m_i/a_i to measurement resources of qubit i.
Binding to device channels happens at lowering time; `binding_override`
on the applying op replaces any subset of the default map and is the
channel-attack surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from pulseguard.core.channels import Channel
from pulseguard.core.errors import PulseError
from pulseguard.core.schedule import Schedule

NATIVE_GATES = {
    "x": (1, 0),
    "sx": (1, 0),
    "h": (1, 0),
    "z": (1, 0),
    "rx": (1, 1),
    "rz": (1, 1),
    "u3": (1, 3),
    "cx": (2, 0),
    "measure": (1, 0),
}

Unitary = tuple[tuple[complex, ...], ...]


def _freeze_unitary(matrix) -> Unitary:
    rows = tuple(tuple(complex(v) for v in row) for row in matrix)
    dim = len(rows)
    if dim == 0 or any(len(row) != dim for row in rows):
        raise PulseError("declared unitary must be square and non-empty")
    if dim & (dim - 1):
        raise PulseError(f"declared unitary dimension must be a power of 2, got {dim}")
    for row in rows:
        for v in row:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise PulseError("declared unitary entries must be finite")
    return rows


@dataclass(frozen=True, slots=True)
class CustomGate:
    """User-defined gate backed by a template-channel schedule.

    Args:
        name: display name, part of the gate-level identity.
        num_qubits: declared qubit count (template qubits 0..n-1).
        num_clbits: declared classical bits consumed by template Acquires.
        pairs: declared adjacent (control, target) template-qubit pairs;
            template control slot u_j addresses pairs[j].
        schedule: the implementation, over template channels.
        declared_unitary: optional claimed action, row-major over the
            declared qubits; enables the semantic check downstream.
    """

    name: str
    num_qubits: int
    num_clbits: int = 0
    pairs: tuple[tuple[int, int], ...] = ()
    schedule: Schedule = field(default_factory=Schedule)
    declared_unitary: Unitary | None = None

    def __post_init__(self):
        if not self.name:
            raise PulseError("custom gate needs a name")
        if self.num_qubits < 1:
            raise PulseError("custom gate must declare at least 1 qubit")
        if self.num_clbits < 0:
            raise PulseError("num_clbits must be >= 0")
        pairs = tuple((int(c), int(t)) for c, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for c, t in pairs:
            if c == t:
                raise PulseError(f"pair ({c},{t}) must couple distinct qubits")
            if not (0 <= c < self.num_qubits and 0 <= t < self.num_qubits):
                raise PulseError(f"pair ({c},{t}) outside declared qubits")
        if self.declared_unitary is not None:
            frozen = _freeze_unitary(self.declared_unitary)
            if len(frozen) != 2**self.num_qubits:
                raise PulseError(
                    f"declared unitary is {len(frozen)}-dimensional but the gate "
                    f"declares {self.num_qubits} qubit(s)"
                )
            object.__setattr__(self, "declared_unitary", frozen)

    def template_slots(self) -> frozenset[Channel]:
        """Template channels the gate's declaration spans (not usage)."""
        slots = set()
        for q in range(self.num_qubits):
            slots.add(Channel("drive", q))
            slots.add(Channel("measure", q))
            slots.add(Channel("acquire", q))
        for j in range(len(self.pairs)):
            slots.add(Channel("control", j))
        return frozenset(slots)


BindingOverride = tuple[tuple[Channel, Channel], ...]


def _freeze_override(override) -> BindingOverride:
    if isinstance(override, dict):
        items = override.items()
    else:
        items = tuple(override)
    frozen = tuple(sorted(((s, d) for s, d in items), key=lambda p: p[0].sort_key()))
    seen = set()
    for slot, dest in frozen:
        if not isinstance(slot, Channel) or not isinstance(dest, Channel):
            raise PulseError("binding override maps Channel -> Channel")
        if slot in seen:
            raise PulseError(f"binding override names slot {slot} twice")
        seen.add(slot)
    return frozen


@dataclass(frozen=True, slots=True)
class GateOp:
    """One circuit operation: a native gate or a custom-gate application."""

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbits: tuple[int, ...] = ()
    custom: CustomGate | None = None
    binding_override: BindingOverride = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "clbits", tuple(int(c) for c in self.clbits))
        object.__setattr__(self, "binding_override", _freeze_override(self.binding_override))
        if len(set(self.qubits)) != len(self.qubits):
            raise PulseError(f"duplicate qubits in {self.name}: {self.qubits}")
        if any(q < 0 for q in self.qubits) or any(c < 0 for c in self.clbits):
            raise PulseError("qubit and clbit indices must be >= 0")
        for p in self.params:
            if not math.isfinite(p):
                raise PulseError(f"{self.name} parameter must be finite, got {p}")
        if self.custom is None:
            if self.name not in NATIVE_GATES:
                raise PulseError(f"unknown native gate {self.name!r}")
            nq, np_ = NATIVE_GATES[self.name]
            if len(self.qubits) != nq:
                raise PulseError(f"{self.name} takes {nq} qubit(s), got {len(self.qubits)}")
            if len(self.params) != np_:
                raise PulseError(f"{self.name} takes {np_} parameter(s), got {len(self.params)}")
            if self.name == "measure":
                if len(self.clbits) != 1:
                    raise PulseError("measure takes exactly 1 classical bit")
            elif self.clbits:
                raise PulseError(f"{self.name} takes no classical bits")
            if self.binding_override:
                raise PulseError("binding overrides apply to custom gates only")
        else:
            if self.name != self.custom.name:
                raise PulseError("op name must match its custom gate's name")
            if len(self.qubits) != self.custom.num_qubits:
                raise PulseError(
                    f"{self.name} declares {self.custom.num_qubits} qubit(s), "
                    f"applied to {len(self.qubits)}"
                )
            if len(self.clbits) != self.custom.num_clbits:
                raise PulseError(
                    f"{self.name} declares {self.custom.num_clbits} clbit(s), "
                    f"applied to {len(self.clbits)}"
                )

    @property
    def is_custom(self) -> bool:
        return self.custom is not None


@dataclass(frozen=True, slots=True)
class GateCircuit:
    num_qubits: int
    num_clbits: int = 0
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1:
            raise PulseError("circuit needs at least 1 qubit")
        if self.num_clbits < 0:
            raise PulseError("num_clbits must be >= 0")
        object.__setattr__(self, "ops", tuple(self.ops))
        used_clbits = set()
        for op in self.ops:
            if any(q >= self.num_qubits for q in op.qubits):
                raise PulseError(f"{op.name} touches qubits {op.qubits} on a "
                                 f"{self.num_qubits}-qubit circuit")
            if any(c >= self.num_clbits for c in op.clbits):
                raise PulseError(f"{op.name} touches clbits {op.clbits} with only "
                                 f"{self.num_clbits} declared")
            if op.name == "measure":
                clbit = op.clbits[0]
                if clbit in used_clbits:
                    raise PulseError(f"classical bit {clbit} written twice")
                used_clbits.add(clbit)

    def with_ops(self, ops) -> "GateCircuit":
        return GateCircuit(self.num_qubits, self.num_clbits, tuple(ops))
