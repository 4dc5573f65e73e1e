"""End-to-end scenario builders: teleportation, search hijack, flip matrix."""

import math

import pytest

from pulseguard.core import AttackError, CX_MAT, gate_level_hash
from pulseguard.cli import (
    TELEPORT_VARIANTS,
    attack_grover,
    build_grover_circuit,
    build_teleport_circuit,
    grover_device,
    run_grover,
    run_teleport,
    teleport_device,
)
from pulseguard.cli.demos import point_seed


COMPLEMENT = {"00": "11", "01": "10", "10": "01", "11": "00"}


@pytest.fixture(scope="module")
def tele_cal():
    return teleport_device()


@pytest.fixture(scope="module")
def grover_cal():
    return grover_device()


def test_variants_are_gate_level_indistinguishable(tele_cal):
    # Every tampered variant keeps the benchmark's gate-level identity;
    # that is the whole point of pulse-level attacks.
    theta = 0.7
    hashes = {
        variant: gate_level_hash(build_teleport_circuit(tele_cal, theta, variant))
        for variant in TELEPORT_VARIANTS
    }
    assert len(set(hashes.values())) == 1


def test_unknown_variant_is_rejected(tele_cal):
    with pytest.raises(AttackError):
        build_teleport_circuit(tele_cal, 0.3, "mitm")


def test_benchmark_endpoints_are_exact(tele_cal):
    result = run_teleport("benchmark", shots=512, points=3)
    rows = result["rows"]
    assert rows[0]["theta"] == 0.0
    assert rows[0]["p1_bob"] == 0.0
    assert rows[-1]["theta"] == pytest.approx(math.pi)
    assert rows[-1]["p1_bob"] == 1.0


def test_benchmark_tracks_the_curve(tele_cal):
    result = run_teleport("benchmark", shots=2048, points=5)
    for row in result["rows"]:
        sigma = max(row["stderr"], 1e-3)
        assert abs(row["p1_bob"] - row["theory"]) < 4 * sigma


def test_eavesdropper_receives_the_state(tele_cal):
    result = run_teleport("coupling_eve", shots=2048, points=5)
    bob_deviations = []
    for row in result["rows"]:
        sigma = max(row["stderr"], 1e-3)
        assert abs(row["p1_eve"] - row["theory"]) < 4 * sigma
        bob_deviations.append(abs(row["p1_bob"] - row["theory"]))
    assert max(bob_deviations) >= 0.2


def test_decoupling_starves_bob(tele_cal):
    result = run_teleport("decoupling", shots=512, points=3)
    # With the coupler silenced nothing entangles, so at theta=pi Bob
    # cannot show the excited state the benchmark would give him.
    end = result["rows"][-1]
    assert end["theory"] == pytest.approx(1.0)
    assert end["p1_bob"] < 0.8


def test_del_h_mimics_the_marginal_but_breaks_purity(tele_cal):
    result = run_teleport("del_h", shots=2048, points=5)
    mid = result["rows"][2]
    assert mid["theta"] == pytest.approx(math.pi / 2)
    assert mid["purity_bob"] == pytest.approx(0.5, abs=0.01)
    for row in result["rows"]:
        sigma = max(row["stderr"], 1e-3)
        assert abs(row["p1_bob"] - row["theory"]) < 4 * sigma


def test_benchmark_purity_stays_pure(tele_cal):
    result = run_teleport("benchmark", shots=256, points=3)
    for row in result["rows"]:
        assert row["purity_bob"] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("marked", sorted(COMPLEMENT))
def test_grover_finds_every_marked_state(marked):
    result = run_grover(marked=marked, target=COMPLEMENT[marked], shots=256)
    assert result["p_marked_honest"] >= 0.999
    assert result["p_target_attacked"] >= 0.95


def test_grover_attack_edits_exactly_eight_phases(grover_cal):
    circuit = build_grover_circuit(grover_cal, "11")
    _, records = attack_grover(circuit, grover_cal, "00")
    assert len(records) == 8
    assert all(r.kind == "phase_mismatch" for r in records)


def test_grover_attack_keeps_the_declared_unitary(grover_cal):
    circuit = build_grover_circuit(grover_cal, "11")
    attacked, _ = attack_grover(circuit, grover_cal, "00")
    step = next(op for op in circuit.ops if op.is_custom)
    bent = next(op for op in attacked.ops if op.is_custom)
    assert bent.custom.declared_unitary == step.custom.declared_unitary
    assert gate_level_hash(attacked) == gate_level_hash(circuit)


@pytest.mark.parametrize("bits", ["2", "abc", "111", ""])
def test_grover_rejects_malformed_bitstrings(grover_cal, bits):
    with pytest.raises(AttackError):
        build_grover_circuit(grover_cal, bits)


def test_point_seed_is_deterministic_and_spread():
    assert point_seed(7, 3) == point_seed(7, 3)
    seeds = {point_seed(7, k) for k in range(11)}
    assert len(seeds) == 11
    assert all(s >= 0 for s in seeds)
