"""Gate matrices, embeddings, and the fidelity measure."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulseguard.core import (
    CX_MAT,
    CZ_MAT,
    H_MAT,
    SX_MAT,
    X_MAT,
    Y_MAT,
    Z_MAT,
    GateCircuit,
    GateOp,
    circuit_unitary,
    embed,
    fidelity,
    gate_matrix,
    rx,
    rz,
    u3,
)

angles = st.floats(-2 * np.pi, 2 * np.pi)


def test_frozen_single_qubit_matrices():
    np.testing.assert_allclose(H_MAT, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    np.testing.assert_allclose(X_MAT @ X_MAT, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(SX_MAT @ SX_MAT, X_MAT, atol=1e-15)
    np.testing.assert_allclose(1j * X_MAT @ Y_MAT @ Z_MAT, -np.eye(2), atol=1e-15)


def test_cx_is_little_endian_control_on_qubit0():
    # Basis order |q1 q0>: control q0 means |01> -> |11> (indices 1 and 3).
    expected = np.eye(4)[:, [0, 3, 2, 1]]
    np.testing.assert_allclose(CX_MAT, expected)
    np.testing.assert_allclose(np.diag(CZ_MAT), [1, 1, 1, -1])


@given(angles)
@settings(max_examples=40, deadline=None)
def test_rz_is_diagonal_phase(theta):
    m = rz(theta)
    np.testing.assert_allclose(m, np.diag(np.exp([-0.5j * theta, 0.5j * theta])))


@given(angles)
@settings(max_examples=40, deadline=None)
def test_rx_matches_exponential(theta):
    expected = np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * np.asarray(
        X_MAT
    )
    np.testing.assert_allclose(rx(theta), expected, atol=1e-12)


@given(angles, angles, angles)
@settings(max_examples=60, deadline=None)
def test_u3_is_unitary_and_decomposes(theta, phi, lam):
    m = np.asarray(u3(theta, phi, lam))
    np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)
    # Euler form: u3 = Rz(phi) Ry(theta) Rz(lam) up to global phase.
    ry = np.cos(theta / 2) * np.eye(2) + np.sin(theta / 2) * np.array(
        [[0, -1], [1, 0]]
    )
    assert fidelity(m, rz(phi) @ ry @ rz(lam)) == pytest.approx(1.0, abs=1e-12)


def test_u3_special_values():
    assert fidelity(u3(np.pi, 0, np.pi), X_MAT) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(u3(np.pi / 2, 0, np.pi), H_MAT) == pytest.approx(1.0, abs=1e-12)


def test_embed_places_single_qubit_gate_little_endian():
    on_q0 = embed(X_MAT, (0,), 2)
    on_q1 = embed(X_MAT, (1,), 2)
    np.testing.assert_allclose(on_q0, np.kron(np.eye(2), X_MAT))
    np.testing.assert_allclose(on_q1, np.kron(X_MAT, np.eye(2)))


def test_embed_reorders_two_qubit_targets():
    forward = embed(CX_MAT, (0, 1), 2)
    np.testing.assert_allclose(forward, CX_MAT)
    # Reversed targets: control moves to q1, so |10> -> |11>.
    reversed_ = embed(CX_MAT, (1, 0), 2)
    np.testing.assert_allclose(reversed_, np.eye(4)[:, [0, 1, 3, 2]])


def test_embed_into_larger_register():
    u = embed(X_MAT, (2,), 3)
    state = np.zeros(8)
    state[0] = 1.0
    np.testing.assert_allclose(u @ state, np.eye(8)[:, 4])


@given(angles)
@settings(max_examples=30, deadline=None)
def test_fidelity_ignores_global_phase(theta):
    phased = np.exp(1j * theta) * np.asarray(H_MAT)
    assert fidelity(phased, H_MAT) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_separates_distinct_gates():
    assert fidelity(X_MAT, Z_MAT) == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < fidelity(H_MAT, X_MAT) < 1.0


@pytest.mark.parametrize(
    "op, expected",
    [
        (GateOp("x", (0,)), X_MAT),
        (GateOp("h", (0,)), H_MAT),
        (GateOp("cx", (0, 1)), CX_MAT),
        (GateOp("rz", (0,), (0.37,)), rz(0.37)),
    ],
)
def test_gate_matrix_matches_tables(op, expected):
    np.testing.assert_allclose(gate_matrix(op), expected, atol=1e-12)


def test_circuit_unitary_composes_in_program_order():
    circuit = GateCircuit(1, 0, (GateOp("h", (0,)), GateOp("z", (0,))))
    np.testing.assert_allclose(
        circuit_unitary(circuit), np.asarray(Z_MAT) @ np.asarray(H_MAT), atol=1e-12
    )


def test_circuit_unitary_entangles_across_qubits():
    bell = GateCircuit(2, 0, (GateOp("h", (0,)), GateOp("cx", (0, 1))))
    state = circuit_unitary(bell) @ np.eye(4)[:, 0]
    np.testing.assert_allclose(
        state, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-12
    )
