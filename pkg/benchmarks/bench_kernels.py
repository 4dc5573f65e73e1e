"""Benchmark the compiled SU(2) window kernel against the pure-numpy lane.

Run:

    python3 benchmarks/bench_kernels.py [--repeats 7]

Times the per-window propagator at pulse-sized and readout-sized sample
counts, reports throughput for every importable lane, and cross-checks
that the lanes agree to roundoff. A separate end-to-end row lowers and
simulates a small circuit in a subprocess per lane, since the lane is
frozen at import time.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from pulseguard._kernels import backend_functions

WINDOWS = (
    ("x_pulse", 160),
    ("cr_pulse", 368),
    ("readout", 480),
    ("long_idle", 65536),
)

_END_TO_END = """
import time
from pulseguard.core import synthesize_snapshot, GateCircuit, GateOp
from pulseguard.lowering import lower_circuit
from pulseguard.sim import SimOptions, simulate_shots

calibration = synthesize_snapshot(3, coupling=((0, 1), (1, 2)), seed=9)
ops = []
for layer in range(8):
    ops += [GateOp("h", (q,)) for q in range(3)]
    ops += [GateOp("cx", (0, 1)), GateOp("cx", (1, 2))]
ops += [GateOp("measure", (q,), clbits=(q,)) for q in range(3)]
circuit = GateCircuit(3, 3, tuple(ops))
schedule = lower_circuit(circuit, calibration)

start = time.perf_counter()
simulate_shots(schedule, calibration, SimOptions(noise=True, shots=512, seed=1))
print(f"{time.perf_counter() - start:.3f}")
"""


def _best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_windows(repeats: int) -> None:
    lanes = backend_functions()
    rng = np.random.default_rng(7)
    print(f"{'window':<10} {'samples':>8}", end="")
    for name in lanes:
        print(f" {name + ' us':>12}", end="")
    print(f" {'max |delta|':>12}")

    for label, samples in WINDOWS:
        weights = (
            rng.normal(size=samples) + 1j * rng.normal(size=samples)
        ) * 0.05
        batch = max(1, 200_000 // samples)
        row = []
        results = {}
        for name, fn in lanes.items():
            elapsed = _best_of(
                lambda fn=fn: [fn(weights, 1.3e-3, 2.1e-4) for _ in range(batch)],
                repeats,
            )
            results[name] = fn(weights, 1.3e-3, 2.1e-4)
            row.append(1e6 * elapsed / batch)
        spread = 0.0
        baseline = next(iter(results.values()))
        for other in results.values():
            spread = max(spread, float(np.max(np.abs(other - baseline))))
        print(f"{label:<10} {samples:>8}", end="")
        for cell in row:
            print(f" {cell:>12.1f}", end="")
        print(f" {spread:>12.2e}")


def bench_end_to_end() -> None:
    print("\nend-to-end 3-qubit circuit, 512 noisy shots (one subprocess per lane):")
    for lane in backend_functions():
        env = dict(os.environ, PULSEGUARD_KERNELS={"python": "py"}.get(lane, lane))
        out = subprocess.run(
            [sys.executable, "-c", _END_TO_END],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        print(f"  {lane:<8} {out.stdout.strip()} s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument(
        "--skip-end-to-end", action="store_true", help="kernel micro-bench only"
    )
    args = parser.parse_args()

    print(f"lanes available: {', '.join(backend_functions())}")
    bench_windows(args.repeats)
    if not args.skip_end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
