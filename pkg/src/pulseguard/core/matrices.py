"""Ideal gate matrices and the gate-level reference unitary.

Qubit ordering is little-endian everywhere: qubit k owns bit k of a basis
index, so a gate matrix written over the qubit tuple (a, b) uses a as the
least significant bit. `embed` lifts such a matrix to the full register.
"""

from __future__ import annotations

import numpy as np

from pulseguard.core.errors import PulseError
from pulseguard.core.gates import GateCircuit, GateOp

I2 = np.eye(2, dtype=np.complex128)
X_MAT = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y_MAT = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z_MAT = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H_MAT = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
SX_MAT = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128) / 2.0

# Over the qubit tuple (control, target): control is the low bit.
CX_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)
CZ_MAT = np.diag([1, 1, 1, -1]).astype(np.complex128)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=np.complex128
    )


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=np.complex128,
    )


def embed(u: np.ndarray, targets: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Lift a gate matrix over `targets` to the full 2^n register.

    targets[0] is the matrix's least significant bit. Pure index
    permutation, so the embedding is exact.
    """
    m = len(targets)
    if len(set(targets)) != m:
        raise PulseError(f"embed targets must be distinct, got {targets}")
    if any(not 0 <= t < num_qubits for t in targets):
        raise PulseError(f"embed targets {targets} outside {num_qubits} qubits")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2**m, 2**m):
        raise PulseError(f"matrix shape {u.shape} does not cover {m} qubit(s)")
    rest = [q for q in range(num_qubits) if q not in targets]
    base = np.kron(np.eye(2 ** len(rest), dtype=np.complex128), u)
    # base treats bits 0..m-1 as targets and the rest above; build the
    # permutation sending each full-register index to base's convention.
    n = num_qubits
    idx = np.arange(2**n)
    to_base = np.zeros(2**n, dtype=np.int64)
    for j, t in enumerate(targets):
        to_base |= ((idx >> t) & 1) << j
    for j, r in enumerate(rest):
        to_base |= ((idx >> r) & 1) << (m + j)
    return base[np.ix_(to_base, to_base)]


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Global-phase-invariant unitary similarity |Tr(U† V)| / dim."""
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise PulseError(f"fidelity needs equal square matrices, got {u.shape}, {v.shape}")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def gate_matrix(op: GateOp) -> np.ndarray:
    """Ideal matrix of one op, over op.qubits (first qubit = low bit)."""
    if op.custom is not None:
        if op.custom.declared_unitary is None:
            raise PulseError(
                f"custom gate {op.name!r} declares no unitary; no ideal matrix exists"
            )
        return np.array(op.custom.declared_unitary, dtype=np.complex128)
    name = op.name
    if name == "x":
        return X_MAT
    if name == "sx":
        return SX_MAT
    if name == "h":
        return H_MAT
    if name == "z":
        return Z_MAT
    if name == "rx":
        return rx(op.params[0])
    if name == "rz":
        return rz(op.params[0])
    if name == "u3":
        return u3(*op.params)
    if name == "cx":
        return CX_MAT
    raise PulseError(f"no ideal matrix for {name!r}")


def circuit_unitary(circuit: GateCircuit) -> np.ndarray:
    """Compose the ideal unitary of a measurement-free circuit."""
    dim = 2**circuit.num_qubits
    total = np.eye(dim, dtype=np.complex128)
    for op in circuit.ops:
        if op.name == "measure":
            raise PulseError("circuit_unitary cannot include measurements")
        total = embed(gate_matrix(op), op.qubits, circuit.num_qubits) @ total
    return total
