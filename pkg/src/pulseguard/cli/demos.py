"""End-to-end demonstration scenarios behind `pulseguard demo`.

Three storylines, each runnable as an honest benchmark and as one or
more pulse-level attacks on the same gate-level circuit:

* teleport: a state is pushed along a coupler chain to Bob; a channel
  plunder reroutes the coupler so Eve receives it instead, and a buried
  extra Hadamard reproduces Bob's statistics while quietly leaving him
  holding half of an entangled pair.
* grover: a two-qubit search oracle is retargeted to the attacker's
  bitstring by editing nothing but frame phases.
* flip: the seven-by-two matrix of tamper kinds, disarmed and armed,
  with the verification stage that catches each arm.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import replace

from pulseguard.attacks import (
    FLIP_KINDS,
    TamperRecord,
    build_flip_gadget,
    phase_mismatch,
    qubit_plunder,
)
from pulseguard.core import (
    AttackError,
    CalibrationSnapshot,
    CustomGate,
    GateCircuit,
    GateOp,
    Schedule,
    ShiftPhase,
    synthesize_snapshot,
)
from pulseguard.core.channels import control, drive
from pulseguard.core.matrices import CX_MAT, circuit_unitary
from pulseguard.core.serialize import content_hash
from pulseguard.lowering import gate_from_circuit, lower_circuit
from pulseguard.sim import SimOptions, simulate_density, simulate_shots
from pulseguard.verify import make_record, verify_pipeline

__all__ = [
    "TELEPORT_VARIANTS",
    "attack_grover",
    "build_grover_circuit",
    "build_teleport_circuit",
    "grover_device",
    "point_seed",
    "run_flip",
    "run_grover",
    "run_teleport",
    "teleport_device",
]

TELEPORT_VARIANTS = ("benchmark", "coupling_eve", "decoupling", "del_h")

_TELEPORT_GATE = 2  # position of the coupling gate in the teleport circuit


def point_seed(seed: int, index: int) -> int:
    """Independent per-point RNG seed derived by hashing."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def _p_one(result, slot: int) -> float:
    """Probability that memory slot `slot` read 1 (slot 0 is rightmost)."""
    return sum(
        p for bits, p in result.probabilities.items() if bits[-1 - slot] == "1"
    )


def _count_one(result, slot: int) -> int:
    return sum(n for bits, n in result.counts.items() if bits[-1 - slot] == "1")


# ---------------------------------------------------------------------------
# teleport


def teleport_device(seed: int = 2024) -> CalibrationSnapshot:
    """4-qubit chain with couplers (2, 1) and (2, 3).

    The couplers get identical cross-resonance templates and qubits 1 and
    3 identical drive calibrations, as on hardware with twin units off a
    shared fabrication run. Rerouted pulses are then drop-in compatible,
    which is the worst case for the defender: nothing about the hijacked
    schedule looks miscalibrated.
    """
    snapshot = synthesize_snapshot(4, coupling=((2, 1), (2, 3)), seed=seed)
    donor = snapshot.pairs[snapshot.pair_ordinal((2, 3))]
    pairs = tuple(
        replace(p, cr_scale=donor.cr_scale, cr_template=donor.cr_template)
        for p in snapshot.pairs
    )
    twin = snapshot.qubits[3]
    qubits = list(snapshot.qubits)
    qubits[1] = replace(
        qubits[1],
        rabi_scale=twin.rabi_scale,
        x_template=twin.x_template,
        sx_template=twin.sx_template,
    )
    return replace(snapshot, qubits=tuple(qubits), pairs=pairs)


def _coupling_gate(calibration: CalibrationSnapshot) -> CustomGate:
    sub = GateCircuit(2, 0, (GateOp("cx", (0, 1)),))
    return gate_from_circuit(
        "coupling", sub, calibration, qubits=(2, 3), pairs=((0, 1),),
        declared_unitary=CX_MAT,
    )


def build_teleport_circuit(
    calibration: CalibrationSnapshot,
    theta: float,
    variant: str = "benchmark",
    measured: bool = True,
) -> GateCircuit:
    """State push from qubit 2 to Bob (qubit 3), with Eve on qubit 1.

    The state RX(theta)|0> enters on qubit 2; CX onto the neighbor, then
    H and CZ walk it across coherently, no feed-forward needed. Bob's
    P(1) traces sin^2(theta/2). Variants tamper with the coupling gate
    only; the gate-level circuit is identical for all of them.
    """
    if variant not in TELEPORT_VARIANTS:
        raise AttackError(
            f"unknown teleport variant {variant!r}; expected one of {TELEPORT_VARIANTS}"
        )
    gate = _coupling_gate(calibration)
    if variant == "decoupling":
        gate = replace(gate, schedule=Schedule())
    elif variant == "del_h":
        sub = GateCircuit(2, 0, (GateOp("cx", (0, 1)), GateOp("h", (0,))))
        gate = gate_from_circuit(
            "coupling", sub, calibration, qubits=(2, 3), pairs=((0, 1),),
            declared_unitary=CX_MAT,
        )
    coupling = GateOp("coupling", (2, 3), custom=gate)
    ops = [
        GateOp("z", (2,)),
        GateOp("rx", (2,), (theta,)),
        coupling,
        GateOp("h", (2,)),
        GateOp("h", (3,)),
        GateOp("cx", (2, 3)),
        GateOp("h", (3,)),
    ]
    if measured:
        ops.append(GateOp("measure", (3,), clbits=(0,)))
        ops.append(GateOp("measure", (1,), clbits=(1,)))
    circuit = GateCircuit(4, 2 if measured else 0, tuple(ops))
    if variant == "coupling_eve":
        eve_pair = calibration.pair_ordinal((2, 1))
        circuit, _ = qubit_plunder(
            circuit,
            _TELEPORT_GATE,
            {drive(1): drive(1), control(0): control(eve_pair)},
        )
    return circuit


def run_teleport(
    variant: str = "benchmark",
    shots: int = 4096,
    seed: int = 7,
    points: int = 11,
    device_seed: int = 2024,
) -> dict:
    """Sweep theta over a grid and record Bob, Eve, and Bob's purity.

    Returns a dict with `rows` of per-theta measurements plus provenance.
    Noiseless on purpose: the contrast between variants is unitary, and
    shot noise is the only statistical effect left in the numbers.
    """
    calibration = teleport_device(device_seed)
    rows = []
    for i in range(points):
        theta = math.pi * i / (points - 1 if points > 1 else 1)
        circuit = build_teleport_circuit(calibration, theta, variant)
        schedule = lower_circuit(circuit, calibration, mode="permissive")
        options = SimOptions(noise=False, shots=shots, seed=point_seed(seed, i))
        result = simulate_shots(schedule, calibration, options)

        bare = build_teleport_circuit(calibration, theta, variant, measured=False)
        state = simulate_density(
            lower_circuit(bare, calibration, mode="permissive"),
            calibration,
            SimOptions(noise=False),
        )
        purity = state.partial_trace((3,)).purity()

        theory = math.sin(theta / 2) ** 2
        p1_bob = _count_one(result, 0) / shots
        p1_eve = _count_one(result, 1) / shots
        rows.append(
            {
                "theta": theta,
                "p1_bob": p1_bob,
                "p1_eve": p1_eve,
                "purity_bob": purity,
                "stderr": math.sqrt(max(theory * (1 - theory), 1e-12) / shots),
                "theory": theory,
            }
        )
    return {
        "demo": "teleport",
        "variant": variant,
        "shots": shots,
        "seed": seed,
        "calibration_hash": content_hash(calibration),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# grover


def grover_device(seed: int = 99) -> CalibrationSnapshot:
    return synthesize_snapshot(2, coupling=((0, 1),), seed=seed)


def _check_bits(bits: str) -> str:
    if len(bits) != 2 or any(b not in "01" for b in bits):
        raise AttackError(f"expected a 2-bit string like '10', got {bits!r}")
    return bits


def _oracle_angles(bits: str) -> tuple[float, float]:
    # Phase on qubit q depends on the other qubit's bit; together with CZ
    # this stamps a pi phase on exactly the marked basis state.
    s0, s1 = int(bits[1]), int(bits[0])
    return math.pi * (1 - s1) / 2, math.pi * (1 - s0) / 2


def _cz_ops() -> tuple[GateOp, ...]:
    return (GateOp("h", (1,)), GateOp("cx", (0, 1)), GateOp("h", (1,)))


def _grover_subcircuit(bits: str) -> GateCircuit:
    a0, a1 = _oracle_angles(bits)
    oracle = (
        GateOp("rz", (0,), (a0,)),
        GateOp("rz", (1,), (a1,)),
        *_cz_ops(),
        GateOp("rz", (0,), (a0,)),
        GateOp("rz", (1,), (a1,)),
    )
    diffusion = (
        GateOp("h", (0,)),
        GateOp("h", (1,)),
        GateOp("rz", (0,), (math.pi,)),
        GateOp("rz", (1,), (math.pi,)),
        *_cz_ops(),
        GateOp("h", (0,)),
        GateOp("h", (1,)),
    )
    return GateCircuit(2, 0, oracle + diffusion)


def build_grover_circuit(
    calibration: CalibrationSnapshot, marked: str = "11"
) -> GateCircuit:
    """One-iteration two-qubit search; lands on `marked` with certainty."""
    sub = _grover_subcircuit(_check_bits(marked))
    gate = gate_from_circuit(
        "grover_step",
        sub,
        calibration,
        qubits=(0, 1),
        pairs=((0, 1),),
        declared_unitary=circuit_unitary(sub),
    )
    return GateCircuit(
        2,
        2,
        (
            GateOp("h", (0,)),
            GateOp("h", (1,)),
            GateOp("grover_step", (0, 1), custom=gate),
            GateOp("measure", (0,), clbits=(0,)),
            GateOp("measure", (1,), clbits=(1,)),
        ),
    )


def attack_grover(
    circuit: GateCircuit,
    calibration: CalibrationSnapshot,
    target: str,
) -> tuple[GateCircuit, tuple[TamperRecord, ...]]:
    """Retarget the search by editing frame phases only.

    Diffs the gate's schedule against the oracle for `target` and rewrites
    one phase instruction at a time until they agree. The gate keeps its
    original declared unitary and the circuit its hash; only ShiftPhase
    values move. A marked/target pair differing in both bits touches all
    four oracle angles, which is eight phase instructions.
    """
    index = next(
        i for i, op in enumerate(circuit.ops) if op.name == "grover_step"
    )
    op = circuit.ops[index]
    goal = gate_from_circuit(
        "grover_step",
        _grover_subcircuit(_check_bits(target)),
        calibration,
        qubits=tuple(range(op.custom.num_qubits)),
        pairs=op.custom.pairs,
    ).schedule

    current = op.custom.schedule
    records: list[TamperRecord] = []
    for _ in range(64):
        if current == goal:
            break
        mismatch = next(
            i
            for i, (have, want) in enumerate(zip(current.entries, goal.entries))
            if have != want
        )
        want = goal.entries[mismatch].instruction
        if not isinstance(want, ShiftPhase):
            raise AttackError(
                "schedules differ outside phase instructions; phase edits "
                "cannot bridge them"
            )
        current, record = phase_mismatch(current, mismatch, want.delta)
        records.append(record)
    else:
        raise AttackError("phase diff did not converge")

    tampered = replace(op, custom=replace(op.custom, schedule=current))
    ops = list(circuit.ops)
    ops[index] = tampered
    return circuit.with_ops(ops), tuple(records)


def run_grover(
    marked: str = "11",
    target: str = "00",
    shots: int = 4096,
    seed: int = 7,
    device_seed: int = 99,
) -> dict:
    """Honest search for `marked`, then the phase attack toward `target`."""
    calibration = grover_device(device_seed)
    circuit = build_grover_circuit(calibration, marked)

    def distribution(circ: GateCircuit, point: int) -> dict[str, float]:
        schedule = lower_circuit(circ, calibration, mode="permissive")
        options = SimOptions(noise=False, shots=shots, seed=point_seed(seed, point))
        return dict(simulate_shots(schedule, calibration, options).probabilities)

    honest = distribution(circuit, 0)
    attacked_circuit, records = attack_grover(circuit, calibration, target)
    attacked = distribution(attacked_circuit, 1)
    return {
        "demo": "grover",
        "marked": marked,
        "target": target,
        "shots": shots,
        "seed": seed,
        "calibration_hash": content_hash(calibration),
        "honest": honest,
        "attacked": attacked,
        "p_marked_honest": honest.get(marked, 0.0),
        "p_target_attacked": attacked.get(target, 0.0),
        "edits": [
            {"kind": r.kind, "target": r.target, "params": r.params}
            for r in records
        ],
    }


# ---------------------------------------------------------------------------
# flip matrix


def run_flip(
    kinds: tuple[str, ...] = FLIP_KINDS,
    seed: int = 7,
    device_seed: int = 5,
    shots: int = 4096,
) -> dict:
    """Disarmed/armed excitation for each tamper kind, plus attribution.

    Each disarmed gadget is published as a trusted record and re-verified
    (it must pass); each armed gadget is verified against that record and
    the stages that flag it are reported. The block arm runs with noise
    on, since decay is its entire signal.
    """
    calibration = synthesize_snapshot(2, seed=device_seed)
    rows = []
    for i, kind in enumerate(kinds):
        clean, _ = build_flip_gadget(calibration, kind, armed=False)
        armed, record = build_flip_gadget(calibration, kind, armed=True)
        noisy = kind == "block"

        def excitation(circuit: GateCircuit, point: int) -> float:
            schedule = lower_circuit(circuit, calibration, mode="permissive")
            options = SimOptions(
                noise=noisy, shots=shots, seed=point_seed(seed, point)
            )
            return _p_one(simulate_shots(schedule, calibration, options), 0)

        trusted = make_record(clean, calibration)
        clean_reports = verify_pipeline(clean, trusted, calibration)
        armed_reports = verify_pipeline(armed, trusted, calibration)
        rows.append(
            {
                "kind": kind,
                "p1_disarmed": excitation(clean, 2 * i),
                "p1_armed": excitation(armed, 2 * i + 1),
                "clean_verdict": all(r.passed for r in clean_reports),
                "flagged_stages": [
                    r.stage for r in armed_reports if not r.passed
                ],
                "tamper": record.kind,
            }
        )
    return {
        "demo": "flip",
        "shots": shots,
        "seed": seed,
        "calibration_hash": content_hash(calibration),
        "rows": rows,
    }
