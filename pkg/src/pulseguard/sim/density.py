"""Density matrices over little-endian qubit registers.

Qubit k owns bit k of the basis index. Devices top out at eight qubits,
so operators are applied as full embedded matrices; per-sample work lives
in the SU(2) kernels, not here.
"""

from __future__ import annotations

import string

import numpy as np

from pulseguard.core.errors import SimulationError
from pulseguard.core.matrices import embed


class DensityState:
    """Mutable density matrix for num_qubits qubits."""

    __slots__ = ("num_qubits", "rho")

    def __init__(self, rho: np.ndarray, num_qubits: int):
        dim = 2**num_qubits
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (dim, dim):
            raise SimulationError(
                f"density matrix shape {rho.shape} does not match {num_qubits} qubits"
            )
        self.rho = rho
        self.num_qubits = num_qubits

    @classmethod
    def ground(cls, num_qubits: int) -> "DensityState":
        dim = 2**num_qubits
        rho = np.zeros((dim, dim), dtype=np.complex128)
        rho[0, 0] = 1.0
        return cls(rho, num_qubits)

    @classmethod
    def from_statevector(cls, vec: np.ndarray, num_qubits: int) -> "DensityState":
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        return cls(np.outer(v, v.conj()), num_qubits)

    def copy(self) -> "DensityState":
        return DensityState(self.rho.copy(), self.num_qubits)

    def apply_unitary(self, u: np.ndarray, qubits: tuple[int, ...]) -> None:
        full = embed(u, qubits, self.num_qubits)
        self.rho = full @ self.rho @ full.conj().T

    def apply_kraus(self, operators, qubit: int) -> None:
        """Apply a single-qubit channel given by 2x2 Kraus operators."""
        total = np.zeros_like(self.rho)
        for k in operators:
            full = embed(np.asarray(k, dtype=np.complex128), (qubit,), self.num_qubits)
            total += full @ self.rho @ full.conj().T
        self.rho = total

    def probability_one(self, qubit: int) -> float:
        diag = np.real(np.diag(self.rho))
        idx = np.arange(diag.size)
        return float(diag[(idx >> qubit) & 1 == 1].sum())

    def project(self, qubit: int, outcome: int) -> tuple[float, "DensityState | None"]:
        """Measure `qubit` in the Z basis, postselecting on `outcome`.

        Returns the outcome probability and the normalized post-measurement
        state (None when the probability is numerically zero). The register
        keeps its full width.
        """
        idx = np.arange(self.rho.shape[0])
        sel = np.where((idx >> qubit) & 1 == outcome)[0]
        projected = np.zeros_like(self.rho)
        projected[np.ix_(sel, sel)] = self.rho[np.ix_(sel, sel)]
        prob = float(np.real(np.trace(projected)))
        if prob <= 1e-15:
            return 0.0, None
        return prob, DensityState(projected / prob, self.num_qubits)

    def partial_trace(self, keep: tuple[int, ...]) -> "DensityState":
        keep_sorted = sorted(set(keep))
        if any(q < 0 or q >= self.num_qubits for q in keep_sorted):
            raise SimulationError(f"cannot keep qubits {keep} of {self.num_qubits}")
        n = self.num_qubits
        tensor = self.rho.reshape((2,) * (2 * n))
        syms = string.ascii_lowercase
        row, col, out_row, out_col = [], [], [], []
        cursor = 0
        for axis in range(n):
            q = n - 1 - axis
            if q in keep_sorted:
                r, c = syms[cursor], syms[cursor + 1]
                cursor += 2
                row.append(r)
                col.append(c)
                out_row.append(r)
                out_col.append(c)
            else:
                s = syms[cursor]
                cursor += 1
                row.append(s)
                col.append(s)
        spec = "".join(row) + "".join(col) + "->" + "".join(out_row) + "".join(out_col)
        k = len(keep_sorted)
        reduced = np.einsum(spec, tensor).reshape(2**k, 2**k)
        return DensityState(reduced, k)

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def blend(self, other: "DensityState", weight: float) -> None:
        """Accumulate weight * other into this state (for ensemble averages)."""
        if other.num_qubits != self.num_qubits:
            raise SimulationError("cannot blend states of different widths")
        self.rho = self.rho + weight * other.rho
