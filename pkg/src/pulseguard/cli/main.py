"""Command line interface.

Artifacts (calibrations, circuits, schedules, tamper records) travel as
canonical JSON files, so every subcommand composes with the others through
the filesystem. Exit codes: 0 success, 1 usage or artifact errors, 2
verification verdict failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import NoReturn

from pulseguard import __version__
from pulseguard.attacks import (
    qubit_block,
    qubit_plunder,
    qubit_reorder,
    frequency_mismatch,
    phase_mismatch,
    timing_mismatch,
    waveform_mismatch,
)
from pulseguard.cli import demos
from pulseguard.core import (
    CalibrationSnapshot,
    Channel,
    GateCircuit,
    Schedule,
    drift_snapshot,
    serialize,
    synthesize_snapshot,
)
from pulseguard.lowering import MODES, lower_circuit
from pulseguard.sim import SimOptions, simulate_shots
from pulseguard.verify import (
    QuarantineError,
    Tolerances,
    fetch,
    publish,
    verify_pipeline,
)

__all__ = ["main"]

_USAGE_EXIT = 1
_VERDICT_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures on exit code 1; 2 is a verdict."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_USAGE_EXIT)


def _read(path: str, expected: type):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}")
    return serialize.deserialize(data, expected=expected)


def _write(path: str | None, artifact) -> None:
    data = serialize.canonical_serialize(artifact) + b"\n"
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(path).write_bytes(data)


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_csv(path: str, header: list[str], rows: list[list], meta: dict) -> None:
    buffer = io.StringIO()
    for key, value in meta.items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer)
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buffer.getvalue())


def _provenance(result: dict) -> dict:
    meta = {"version": __version__}
    for key in ("demo", "variant", "marked", "target", "shots", "seed"):
        if key in result:
            meta[key] = result[key]
    meta["calibration"] = result["calibration_hash"]
    return meta


def _parse_coupling(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in filter(None, text.split(",")):
        control, _, target = chunk.partition(":")
        pairs.append((int(control), int(target)))
    return tuple(pairs)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_calibrate(args) -> int:
    snapshot = synthesize_snapshot(
        args.qubits,
        coupling=_parse_coupling(args.coupling),
        seed=args.seed,
    )
    if args.drift_hours:
        snapshot = drift_snapshot(snapshot, args.drift_hours, seed=args.drift_seed)
    _write(args.out, snapshot)
    if args.out and args.out != "-":
        print(f"wrote {args.out} ({serialize.content_hash(snapshot)})")
    return 0


def _cmd_lower(args) -> int:
    calibration = _read(args.calibration, CalibrationSnapshot)
    circuit = _read(args.circuit, GateCircuit)
    schedule = lower_circuit(circuit, calibration, mode=args.mode)
    _write(args.out, schedule)
    if args.out and args.out != "-":
        print(f"wrote {args.out} ({schedule.duration} samples)")
    return 0


def _cmd_simulate(args) -> int:
    calibration = _read(args.calibration, CalibrationSnapshot)
    if args.schedule:
        schedule = _read(args.schedule, Schedule)
    else:
        circuit = _read(args.circuit, GateCircuit)
        schedule = lower_circuit(circuit, calibration, mode="permissive")
    options = SimOptions(noise=args.noise, shots=args.shots, seed=args.seed)
    result = simulate_shots(schedule, calibration, options)
    payload = {
        "provenance": {
            "version": __version__,
            "calibration": serialize.content_hash(calibration),
            "seed": args.seed,
        },
        "shots": result.shots,
        "counts": dict(sorted(result.counts.items())),
        "probabilities": dict(sorted(result.probabilities.items())),
    }
    _write_json(args.out, payload)
    return 0


def _labels(mapping: dict) -> dict[Channel, Channel]:
    return {Channel.parse(k): Channel.parse(v) for k, v in mapping.items()}


def _cmd_attack(args) -> int:
    params = json.loads(args.params) if args.params else {}
    calibration = (
        _read(args.calibration, CalibrationSnapshot) if args.calibration else None
    )
    try:
        if args.kind == "plunder":
            artifact = _read(args.artifact, GateCircuit)
            tampered, record = qubit_plunder(
                artifact, int(params["gate_index"]), _labels(params["remap"])
            )
        elif args.kind == "block":
            artifact = _read(args.artifact, GateCircuit)
            channels = params.get("channels")
            tampered, record = qubit_block(
                artifact,
                int(params["gate_index"]),
                int(params["delay_duration"]),
                channels=tuple(Channel.parse(c) for c in channels)
                if channels
                else None,
            )
        elif args.kind == "reorder":
            artifact = _read(args.artifact, GateCircuit)
            tampered, record = qubit_reorder(
                artifact,
                int(params["gate_index"]),
                _labels(params["permutation"]),
                calibration=calibration,
            )
        elif args.kind == "timing":
            artifact = _read(args.artifact, Schedule)
            tampered, record = timing_mismatch(
                artifact, int(params["entry_index"]), int(params["offset"])
            )
        elif args.kind == "frequency":
            artifact = _read(args.artifact, Schedule)
            tampered, record = frequency_mismatch(
                artifact,
                Channel.parse(params["channel"]),
                float(params["frequency"]),
                play_index=params.get("play_index"),
            )
        elif args.kind == "phase":
            artifact = _read(args.artifact, Schedule)
            tampered, record = phase_mismatch(
                artifact, int(params["entry_index"]), float(params["phase"])
            )
        else:
            artifact = _read(args.artifact, Schedule)
            tampered, record = waveform_mismatch(
                artifact,
                int(params["entry_index"]),
                serialize.decode(params["waveform"]),
            )
    except KeyError as exc:
        raise SystemExit(f"attack params missing key {exc}")
    _write(args.out, tampered)
    if args.record:
        _write(args.record, record)
    print(f"applied {record.kind} to {record.target}", file=sys.stderr)
    return 0


def _finding_lines(report) -> list[str]:
    lines = []
    for finding in report.findings:
        detail = f"  {finding.severity} {finding.kind} at {finding.location}: {finding.explanation}"
        if finding.measured or finding.expected:
            detail += f" (measured {finding.measured or '?'}, expected {finding.expected or '?'})"
        lines.append(detail)
    return lines


def _tolerances(args) -> Tolerances:
    overrides = {
        name: getattr(args, name)
        for name in (
            "freq_tol",
            "phase_tol",
            "amp_rel_tol",
            "duration_tol",
            "fidelity_threshold",
        )
        if getattr(args, name) is not None
    }
    return Tolerances(**overrides)


def _cmd_verify(args) -> int:
    calibration = _read(args.calibration, CalibrationSnapshot)
    circuit = _read(args.circuit, GateCircuit)
    circuit_hash = serialize.gate_level_hash(circuit)
    try:
        trusted = fetch(args.store, circuit_hash)
    except QuarantineError as exc:
        print(f"verdict: FAIL ({exc})")
        return _VERDICT_EXIT
    reports = verify_pipeline(circuit, trusted, calibration, _tolerances(args))
    for report in reports:
        print(f"{report.stage}: {'pass' if report.passed else 'FAIL'}")
        for line in _finding_lines(report):
            print(line)
    passed = all(report.passed for report in reports)
    print(f"verdict: {'PASS' if passed else 'FAIL'}")
    if args.out:
        _write_json(
            args.out,
            {
                "provenance": {
                    "version": __version__,
                    "calibration": serialize.content_hash(calibration),
                    "circuit": circuit_hash,
                },
                "passed": passed,
                "stages": [
                    {
                        "stage": r.stage,
                        "passed": r.passed,
                        "findings": [
                            {
                                "severity": f.severity,
                                "kind": f.kind,
                                "location": f.location,
                                "explanation": f.explanation,
                                "measured": f.measured,
                                "expected": f.expected,
                            }
                            for f in r.findings
                        ],
                    }
                    for r in reports
                ],
            },
        )
    return 0 if passed else _VERDICT_EXIT


def _cmd_publish(args) -> int:
    calibration = _read(args.calibration, CalibrationSnapshot)
    circuit = _read(args.circuit, GateCircuit)
    record = publish(args.store, circuit, calibration)
    print(f"published {record.circuit_hash} -> {Path(args.store) / record.circuit_hash}")
    return 0


def _demo_out(args, result: dict, header: list[str], rows: list[list]) -> None:
    if not args.out:
        return
    if args.out.endswith(".csv"):
        _write_csv(args.out, header, rows, _provenance(result))
    else:
        _write_json(args.out, {"provenance": _provenance(result), **result})


def _cmd_demo(args) -> int:
    if args.scenario == "teleport":
        result = demos.run_teleport(
            variant=args.variant,
            shots=args.shots,
            seed=args.seed,
            points=args.points,
        )
        header = ["theta", "p1_bob", "p1_eve", "purity_bob", "stderr", "theory"]
        rows = [[r[k] for k in header] for r in result["rows"]]
        print(f"teleport {args.variant}:")
        for r in result["rows"]:
            print(
                f"  theta={r['theta']:.4f} bob={r['p1_bob']:.4f} "
                f"eve={r['p1_eve']:.4f} purity={r['purity_bob']:.4f} "
                f"theory={r['theory']:.4f}"
            )
    elif args.scenario == "grover":
        result = demos.run_grover(
            marked=args.marked, target=args.target, shots=args.shots, seed=args.seed
        )
        header = ["bitstring", "p_honest", "p_attacked"]
        keys = sorted(set(result["honest"]) | set(result["attacked"]))
        rows = [
            [k, result["honest"].get(k, 0.0), result["attacked"].get(k, 0.0)]
            for k in keys
        ]
        print(
            f"grover: honest P({args.marked})={result['p_marked_honest']:.4f}, "
            f"attacked P({args.target})={result['p_target_attacked']:.4f} "
            f"after {len(result['edits'])} phase edits"
        )
    else:
        result = demos.run_flip(seed=args.seed, shots=args.shots)
        header = [
            "kind",
            "p1_disarmed",
            "p1_armed",
            "clean_verdict",
            "flagged_stages",
        ]
        rows = [
            [
                r["kind"],
                r["p1_disarmed"],
                r["p1_armed"],
                r["clean_verdict"],
                "+".join(r["flagged_stages"]),
            ]
            for r in result["rows"]
        ]
        print("flip matrix (disarmed / armed excitation, flagged stages):")
        for r in result["rows"]:
            stages = "+".join(r["flagged_stages"]) or "none"
            print(
                f"  {r['kind']:<10} {r['p1_disarmed']:.4f} / {r['p1_armed']:.4f}"
                f"  clean={'pass' if r['clean_verdict'] else 'FAIL'}"
                f"  armed flagged at {stages}"
            )
    _demo_out(args, result, header, rows)
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> _Parser:
    parser = _Parser(prog="pulseguard", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="synthesize a device calibration")
    p.add_argument("--qubits", type=int, default=2)
    p.add_argument("--coupling", default="", help="directed pairs, e.g. 0:1,2:1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drift-hours", type=float, default=0.0)
    p.add_argument("--drift-seed", type=int, default=0)
    p.add_argument("-o", "--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("lower", help="compile a gate circuit to a schedule")
    p.add_argument("--calibration", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--mode", choices=MODES, default="strict")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_lower)

    p = sub.add_parser("simulate", help="run a schedule and report counts")
    p.add_argument("--calibration", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--schedule")
    group.add_argument("--circuit")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--noise", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("attack", help="apply a tamper pass to an artifact")
    p.add_argument(
        "--kind",
        required=True,
        choices=(
            "plunder",
            "block",
            "reorder",
            "timing",
            "frequency",
            "phase",
            "waveform",
        ),
    )
    p.add_argument("--artifact", required=True, help="circuit or schedule file")
    p.add_argument("--params", help="JSON object of pass parameters")
    p.add_argument("--calibration", help="needed to reorder control channels")
    p.add_argument("--record", help="write the tamper record here")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("publish", help="vet a circuit and store its trusted record")
    p.add_argument("--calibration", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--store", required=True)
    p.set_defaults(func=_cmd_publish)

    p = sub.add_parser("verify", help="check a circuit against its trusted record")
    p.add_argument("--calibration", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--freq-tol", type=float, default=None)
    p.add_argument("--phase-tol", type=float, default=None)
    p.add_argument("--amp-rel-tol", type=float, default=None)
    p.add_argument("--duration-tol", type=int, default=None)
    p.add_argument("--fidelity-threshold", type=float, default=None)
    p.add_argument("-o", "--out", help="also write a JSON report")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("demo", help="run an end-to-end attack scenario")
    p.add_argument("scenario", choices=("teleport", "grover", "flip"))
    p.add_argument("--variant", choices=demos.TELEPORT_VARIANTS, default="benchmark")
    p.add_argument("--marked", default="11")
    p.add_argument("--target", default="00")
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("-o", "--out", help=".csv or .json output path")
    p.set_defaults(func=_cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"pulseguard: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
