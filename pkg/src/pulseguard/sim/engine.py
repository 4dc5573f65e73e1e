"""Schedule execution.

One pass over the entries in time order. Drive windows become exact
SU(2) products via the kernel lane; cross-resonance windows apply the
branch pair (+w on control |0>, -w on control |1>). Measurements split
the run into classical branches so shot counts are drawn from exact
outcome probabilities instead of trajectory sampling.

Timing side channel: a pulse whose start is off the alignment grid picks
up the carrier slip 2*pi*f*offset*dt at every alignment boundary it
crosses, and its channel frame keeps the accumulated slip afterwards.
Aligned schedules are unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from pulseguard._kernels import su2_window
from pulseguard.core.calibration import CalibrationSnapshot
from pulseguard.core.channels import Channel, drive
from pulseguard.core.errors import SimulationError
from pulseguard.core.instructions import (
    Acquire,
    Delay,
    Play,
    SetFrequency,
    SetPhase,
    ShiftFrequency,
    ShiftPhase,
)
from pulseguard.core.matrices import embed, rz
from pulseguard.core.schedule import Schedule, check_overlap
from pulseguard.sim.density import DensityState
from pulseguard.sim.frames import Frame
from pulseguard.sim.noise import idle_kraus

_PRUNE = 1e-12


@dataclass(frozen=True)
class SimOptions:
    """Knobs for a simulation run.

    Attributes:
        noise: Apply idle decoherence between state operations.
        substep: Envelope block size; 1 is sample-exact, larger values
            average the drive over blocks of that many samples.
        shots: Samples drawn by simulate_shots.
        seed: Seed for shot sampling; None draws from OS entropy.
        misalignment_model: Apply the off-grid carrier-slip side channel.
    """

    noise: bool = False
    substep: int = 1
    shots: int = 1024
    seed: int | None = None
    misalignment_model: bool = True

    def __post_init__(self):
        if self.substep < 1:
            raise SimulationError(f"substep must be >= 1, got {self.substep}")
        if self.shots < 1:
            raise SimulationError(f"shots must be >= 1, got {self.shots}")


@dataclass
class ShotResult:
    """Outcome of simulate_shots.

    counts holds sampled shot totals and probabilities the exact branch
    probabilities, both keyed by bitstring with memory slot 0 rightmost.
    density is the shot-averaged final state.
    """

    counts: dict[str, int]
    probabilities: dict[str, float]
    density: DensityState
    shots: int


@dataclass
class _Branch:
    rho: DensityState
    prob: float
    record: dict[int, int] = field(default_factory=dict)


def _bitstring(record: dict[int, int], num_slots: int) -> str:
    return "".join(str(record.get(slot, 0)) for slot in range(num_slots - 1, -1, -1))


class _Runner:
    def __init__(
        self,
        schedule: Schedule,
        calibration: CalibrationSnapshot,
        options: SimOptions,
        unitary_mode: bool,
    ):
        self.schedule = schedule
        self.calib = calibration
        self.opts = options
        self.unitary_mode = unitary_mode
        self.dt = calibration.timing.dt
        self.align = calibration.timing.alignment
        self.num_qubits = calibration.num_qubits

        self.frames: dict[Channel, Frame] = {}
        for q in range(self.num_qubits):
            f_q = calibration.qubit(q).frequency
            self.frames[drive(q)] = Frame(f_q, f_q)
            self.frames[calibration.measure_channel(q)] = Frame(f_q, f_q)
        for ordinal, pair in enumerate(calibration.coupling):
            pc = calibration.pair_calibration(ordinal)
            target_freq = calibration.qubit(pair[1]).frequency
            self.frames[Channel("control", ordinal)] = Frame(pc.frequency, target_freq)

        self.clock = [0] * self.num_qubits
        self.used_slots: set[int] = set()
        self.branches = [_Branch(DensityState.ground(self.num_qubits), 1.0)]
        self.unitary = np.eye(2**self.num_qubits, dtype=np.complex128)

        violations = check_overlap(schedule)
        if violations:
            v = violations[0]
            raise SimulationError(f"overlapping pulses on {v.channel.label}: {v.message}")
        self._acquire_spans = [
            (e.instruction.qubit, e.start_time, e.end_time)
            for e in schedule
            if isinstance(e.instruction, Acquire)
        ]

    # -- frame and clock helpers --------------------------------------

    def _frame(self, channel: Channel) -> Frame:
        frame = self.frames.get(channel)
        if frame is None:
            raise SimulationError(f"channel {channel.label} does not exist on this device")
        return frame

    def _advance(self, qubit: int, time: int) -> None:
        gap = time - self.clock[qubit]
        if gap <= 0:
            self.clock[qubit] = max(self.clock[qubit], time)
            return
        if self.opts.noise:
            q = self.calib.qubit(qubit)
            ops = idle_kraus(gap * self.dt, q.t1, q.t2)
            if ops is not None:
                for branch in self.branches:
                    branch.rho.apply_kraus(ops, qubit)
        self.clock[qubit] = time

    # -- window math ----------------------------------------------------

    def _window(self, weights: np.ndarray, rabi_dt: float, det: float) -> np.ndarray:
        k = self.opts.substep
        n = weights.shape[0]
        if k <= 1 or n <= 1:
            return su2_window(weights, rabi_dt, det)
        m = (n // k) * k
        blocks = weights[:m].reshape(-1, k).mean(axis=1)
        u = su2_window(blocks, rabi_dt * k, det * k)
        if m < n:
            tail = weights[m:]
            u = su2_window(
                np.array([tail.mean()]), rabi_dt * len(tail), det * len(tail)
            ) @ u
        return u

    def _phases(self, frame: Frame, start: int, count: int) -> np.ndarray:
        det = frame.detune_angle(self.dt)
        phases = frame.phase_at(start, self.dt) + det * np.arange(count)
        if self.opts.misalignment_model and start % self.align:
            offset = start % self.align
            slip = 2.0 * math.pi * frame.frequency * 1.0e9 * offset * self.dt
            ks = np.arange(count)
            crossings = (start + ks) // self.align - start // self.align
            phases = phases + slip * crossings
            total = (start + count) // self.align - start // self.align
            frame.phase += slip * total
        return phases

    def _apply_gate(self, u: np.ndarray, qubits: tuple[int, ...]) -> None:
        if self.unitary_mode:
            self.unitary = embed(u, qubits, self.num_qubits) @ self.unitary
        else:
            for branch in self.branches:
                branch.rho.apply_unitary(u, qubits)

    # -- instruction handlers ---------------------------------------------

    def _play_drive(self, entry, qubit: int) -> None:
        frame = self._frame(entry.channel)
        samples = np.asarray(entry.instruction.waveform.materialize(), dtype=np.complex128)
        start = entry.start_time
        if self.calib.in_forbidden_band(frame.frequency):
            self._advance(qubit, entry.end_time)
            return
        self._advance(qubit, start)
        det = frame.detune_angle(self.dt)
        weights = samples * np.exp(1j * self._phases(frame, start, samples.size))
        q = self.calib.qubit(qubit)
        u = self._window(weights, q.rabi_scale * self.dt, det)
        self._apply_gate(u, (qubit,))
        self.clock[qubit] = entry.end_time

    def _play_control(self, entry, ordinal: int) -> None:
        control_q, target_q = self.calib.coupling[ordinal]
        frame_u = self._frame(entry.channel)
        frame_dc = self._frame(drive(control_q))
        samples = np.asarray(entry.instruction.waveform.materialize(), dtype=np.complex128)
        start = entry.start_time
        if self.calib.in_forbidden_band(frame_u.frequency):
            self._advance(control_q, entry.end_time)
            self._advance(target_q, entry.end_time)
            return
        self._advance(control_q, start)
        self._advance(target_q, start)

        det_u = frame_u.detune_angle(self.dt)
        det_dc = frame_dc.detune_angle(self.dt)
        base = self._phases(frame_u, start, samples.size)
        drive_phase = frame_dc.phase_at(start, self.dt) + det_dc * np.arange(samples.size)
        weights = samples * np.exp(1j * (base - drive_phase))

        pc = self.calib.pair_calibration(ordinal)
        rabi_dt = pc.cr_scale * self.dt
        plus = self._window(weights, rabi_dt, det_u)
        minus = self._window(-weights, rabi_dt, det_u)
        # 4x4 over matrix qubits (control=bit0, target=bit1).
        u4 = np.zeros((4, 4), dtype=np.complex128)
        for bc, m in ((0, plus), (1, minus)):
            for r in range(2):
                for c in range(2):
                    u4[bc + 2 * r, bc + 2 * c] = m[r, c]
        self._apply_gate(u4, (control_q, target_q))
        self.clock[control_q] = entry.end_time
        self.clock[target_q] = entry.end_time

    def _play_measure(self, entry, qubit: int) -> None:
        # Stimulus on the readout line: legal only while that qubit is
        # being acquired, and never touches the state.
        span = (entry.start_time, entry.end_time)
        for q, a_start, a_end in self._acquire_spans:
            if q == qubit and a_start < span[1] and span[0] < a_end:
                return
        raise SimulationError(
            f"measurement pulse on m{qubit} has no overlapping acquisition"
        )

    def _acquire(self, entry) -> None:
        inst = entry.instruction
        if inst.memory_slot in self.used_slots:
            raise SimulationError(f"memory slot {inst.memory_slot} written twice")
        self.used_slots.add(inst.memory_slot)
        self._advance(inst.qubit, entry.start_time)
        survivors: list[_Branch] = []
        for branch in self.branches:
            for outcome in (0, 1):
                prob, rho = branch.rho.project(inst.qubit, outcome)
                joint = branch.prob * prob
                if rho is None or joint < _PRUNE:
                    continue
                record = dict(branch.record)
                record[inst.memory_slot] = outcome
                survivors.append(_Branch(rho, joint, record))
        if not survivors:
            raise SimulationError("all measurement branches vanished")
        self.branches = survivors
        self.clock[inst.qubit] = entry.end_time

    # -- main loop ------------------------------------------------------

    def run(self) -> None:
        for entry in self.schedule:
            inst = entry.instruction
            if isinstance(inst, Play):
                channel = inst.channel
                if channel.kind == "drive":
                    self._play_drive(entry, channel.index)
                elif channel.kind == "control":
                    if channel.index >= len(self.calib.coupling):
                        raise SimulationError(
                            f"channel {channel.label} does not exist on this device"
                        )
                    self._play_control(entry, channel.index)
                else:
                    self._play_measure(entry, channel.index)
            elif isinstance(inst, Acquire):
                self._acquire(entry)
            elif isinstance(inst, Delay):
                self._frame(inst.channel)
            elif isinstance(inst, SetFrequency):
                self._frame(inst.channel).set_frequency(entry.start_time, inst.frequency, self.dt)
            elif isinstance(inst, ShiftFrequency):
                self._frame(inst.channel).shift_frequency(entry.start_time, inst.delta, self.dt)
            elif isinstance(inst, SetPhase):
                self._frame(inst.channel).set_phase(entry.start_time, inst.phase, self.dt)
            elif isinstance(inst, ShiftPhase):
                self._frame(inst.channel).shift_phase(entry.start_time, inst.delta, self.dt)
            else:
                raise SimulationError(f"cannot simulate {type(inst).__name__}")
        if self.opts.noise:
            end = self.schedule.duration
            for q in range(self.num_qubits):
                self._advance(q, end)

    def frame_corrected_unitary(self) -> np.ndarray:
        """Fold residual drive-frame phases back into the raw propagator."""
        end = self.schedule.duration
        u = self.unitary
        for q in range(self.num_qubits):
            phase = self.frames[drive(q)].phase_at(end, self.dt)
            if phase != 0.0:
                u = embed(rz(-phase), (q,), self.num_qubits) @ u
        return u


def simulate_unitary(
    schedule: Schedule,
    calibration: CalibrationSnapshot,
    options: SimOptions | None = None,
) -> np.ndarray:
    """Exact propagator of a measurement-free schedule.

    The result is expressed in the logical frame: residual virtual-Z
    phases accumulated on the drive channels are applied as final Rz
    corrections, so a lowered gate can be compared directly against its
    matrix.
    """
    opts = options or SimOptions()
    if opts.noise:
        raise SimulationError("unitary simulation cannot include noise")
    for entry in schedule:
        inst = entry.instruction
        if isinstance(inst, Acquire):
            raise SimulationError("unitary simulation cannot include acquisitions")
        if isinstance(inst, Play) and inst.channel.kind == "measure":
            raise SimulationError("unitary simulation cannot include measurement pulses")
    runner = _Runner(schedule, calibration, opts, unitary_mode=True)
    runner.run()
    return runner.frame_corrected_unitary()


def simulate_density(
    schedule: Schedule,
    calibration: CalibrationSnapshot,
    options: SimOptions | None = None,
) -> DensityState:
    """Final state averaged over measurement outcomes."""
    opts = options or SimOptions()
    runner = _Runner(schedule, calibration, opts, unitary_mode=False)
    runner.run()
    average = DensityState.ground(runner.num_qubits)
    average.rho = np.zeros_like(average.rho)
    total = sum(b.prob for b in runner.branches)
    for branch in runner.branches:
        average.blend(branch.rho, branch.prob / total)
    return average


def simulate_shots(
    schedule: Schedule,
    calibration: CalibrationSnapshot,
    options: SimOptions | None = None,
) -> ShotResult:
    """Run a schedule and sample measurement records.

    Counts are multinomial draws from the exact branch probabilities;
    memory slots an acquisition never wrote read as 0.
    """
    opts = options or SimOptions()
    runner = _Runner(schedule, calibration, opts, unitary_mode=False)
    runner.run()

    num_slots = max(runner.used_slots) + 1 if runner.used_slots else 0
    probabilities: dict[str, float] = {}
    for branch in runner.branches:
        key = _bitstring(branch.record, num_slots)
        probabilities[key] = probabilities.get(key, 0.0) + branch.prob
    total = sum(probabilities.values())
    probabilities = {k: v / total for k, v in probabilities.items()}

    keys = sorted(probabilities)
    weights = np.array([probabilities[k] for k in keys])
    rng = np.random.default_rng(opts.seed)
    draws = rng.multinomial(opts.shots, weights / weights.sum())
    counts = {k: int(d) for k, d in zip(keys, draws) if d > 0}

    average = DensityState.ground(runner.num_qubits)
    average.rho = np.zeros_like(average.rho)
    for branch in runner.branches:
        average.blend(branch.rho, branch.prob / total)
    return ShotResult(counts=counts, probabilities=probabilities, density=average, shots=opts.shots)
