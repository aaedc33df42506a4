"""Greedy influence-guided correction of spin samples.

Each qubit's influence is its own coefficient plus the coupler-weighted sum
of its neighbors' spins:

    I_i = a_i + sum_{(i,j)} b_ij * q_j

Whenever I_i and q_i share a sign, flipping q_i lowers the objective by
2 * I_i * q_i.  Correction repeatedly flips the qubit with the largest such
gain (ties broken by lowest qubit id) until no improving flip remains; the
result is a certified local minimum: I_i * q_i <= 0 for every qubit.

After a flip of qubit i only the influences of i's neighbors change, by
2 * b_ij * q_i_new, so the descent maintains the influence vector
incrementally.  `influences` recomputes the vector from scratch and serves
as the independent cross-check of that fast path.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import IsingProblem, energy, validate_spins

__all__ = [
    "CorrectionReport",
    "influences",
    "flip_gain",
    "correct",
    "correct_batch",
    "is_local_minimum",
    "replay_energy_drops",
    "read_samples_file",
    "write_samples_file",
]


@dataclass(frozen=True)
class CorrectionReport:
    """Flip trace and energy trajectory of one correction.

    `flips` lists (qubit id, influence at flip time) in flip order; each
    flip lowered the objective by exactly twice the influence magnitude.
    `sweeps` counts influence scans: one per flip plus the final scan that
    found nothing left to flip.  `hamming_distance` is the number of spins
    that differ between input and output (at most the flip count).
    """

    initial_energy: float
    final_energy: float
    flips: tuple[tuple[int, float], ...]
    sweeps: int
    hamming_distance: int


@njit(cache=True, nogil=True)
def _descend(q, a, adj_offsets, adj_neighbor, adj_coeff, flip_pos, flip_infl):
    n = q.shape[0]
    infl = np.empty(n, np.float64)
    for i in range(n):
        acc = a[i]
        for e in range(adj_offsets[i], adj_offsets[i + 1]):
            acc += adj_coeff[e] * q[adj_neighbor[e]]
        infl[i] = acc
    capacity = flip_pos.shape[0]
    k = 0
    while True:
        best = -1
        best_gain = 0.0
        for i in range(n):
            gain = infl[i] * q[i]
            if gain > best_gain:
                best_gain = gain
                best = i
        if best < 0:
            return k
        if k >= capacity:
            return -1
        flip_pos[k] = best
        flip_infl[k] = infl[best]
        k += 1
        q[best] = -q[best]
        delta = 2.0 * q[best]
        for e in range(adj_offsets[best], adj_offsets[best + 1]):
            infl[adj_neighbor[e]] += adj_coeff[e] * delta


@njit(cache=True, nogil=True)
def _descend_batch(batch, a, adj_offsets, adj_neighbor, adj_coeff, capacity):
    flip_pos = np.empty(capacity, np.int64)
    flip_infl = np.empty(capacity, np.float64)
    for s in range(batch.shape[0]):
        flips = _descend(
            batch[s], a, adj_offsets, adj_neighbor, adj_coeff, flip_pos, flip_infl
        )
        if flips < 0:
            return s
    return -1


def _adjacency_arrays(problem: IsingProblem):
    topo = problem.topology
    return (
        topo.adj_offsets,
        topo.adj_neighbor_pos,
        problem.b[topo.adj_coupler_index],
    )


def influences(problem: IsingProblem, spins) -> np.ndarray:
    """Influence of every qubit, recomputed from scratch."""
    q = validate_spins(problem.topology, spins).astype(np.float64)
    pi = problem.topology.coupler_positions[:, 0]
    pj = problem.topology.coupler_positions[:, 1]
    out = problem.a.copy()
    np.add.at(out, pi, problem.b * q[pj])
    np.add.at(out, pj, problem.b * q[pi])
    return out


def flip_gain(influence_values: np.ndarray, spins, qubit_id: int, topology=None) -> float:
    """Objective change from flipping one qubit: -2 * I_i * q_i.

    Negative means the flip improves the objective.  `topology` maps the
    qubit id to its position; omit it to index by position directly.
    """
    if topology is not None:
        pos = topology.position_of(qubit_id)
    else:
        pos = int(qubit_id)
        if not (0 <= pos < len(influence_values)):
            raise ValueError(f"qubit id {qubit_id} is not active")
    return -2.0 * float(influence_values[pos]) * float(spins[pos])


def is_local_minimum(problem: IsingProblem, spins) -> bool:
    """Certify that no single flip improves the objective: I_i * q_i <= 0."""
    q = validate_spins(problem.topology, spins).astype(np.float64)
    infl = influences(problem, spins)
    return bool(np.all(infl * q <= 0.0))


def correct(problem: IsingProblem, spins, record: bool = True):
    """Drive one sample to a certified local minimum.

    Returns (corrected spins, CorrectionReport), or (spins, None) when
    `record` is False.  Deterministic: steepest improving flip first, ties
    broken by lowest qubit id; zero influences are never flipped.
    """
    q_in = validate_spins(problem.topology, spins)
    q = q_in.astype(np.float64)
    offsets, neighbor, coeff = _adjacency_arrays(problem)
    capacity = 8 * max(problem.num_qubits, 1) + 64
    while True:
        flip_pos = np.empty(capacity, np.int64)
        flip_infl = np.empty(capacity, np.float64)
        q_try = q.copy()
        flips = _descend(q_try, problem.a, offsets, neighbor, coeff, flip_pos, flip_infl)
        if flips >= 0:
            break
        capacity *= 8
    q_out = q_try.astype(np.int8)
    if not record:
        return q_out, None
    ids = problem.topology.active_qubits
    trace = tuple(
        (int(ids[flip_pos[k]]), float(flip_infl[k])) for k in range(flips)
    )
    report = CorrectionReport(
        initial_energy=energy(problem, q_in),
        final_energy=energy(problem, q_out),
        flips=trace,
        sweeps=flips + 1,
        hamming_distance=int(np.count_nonzero(q_in != q_out)),
    )
    return q_out, report


def correct_batch(problem: IsingProblem, samples, record: bool = False, threads: int = 1):
    """Correct a list of samples; element-wise identical to mapping `correct`.

    Returns (corrected samples array, reports) where reports is a list of
    CorrectionReport when `record` is True and None otherwise.  Thread count
    does not affect the output.
    """
    samples = np.asarray(samples, dtype=np.int8)
    if samples.ndim == 1:
        samples = samples.reshape(1, -1)
    if samples.shape[0] == 0:
        out = samples.reshape(0, problem.num_qubits).copy()
        return out, ([] if record else None)
    if record:
        outs = []
        reports = []
        for row in samples:
            q_out, report = correct(problem, row, record=True)
            outs.append(q_out)
            reports.append(report)
        return np.stack(outs), reports

    for row in samples:
        validate_spins(problem.topology, row)
    batch = samples.astype(np.float64)
    offsets, neighbor, coeff = _adjacency_arrays(problem)
    capacity = 8 * max(problem.num_qubits, 1) + 64

    def run_chunk(chunk: np.ndarray) -> None:
        cap = capacity
        while True:
            work = chunk.copy()
            overflow = _descend_batch(work, problem.a, offsets, neighbor, coeff, cap)
            if overflow < 0:
                chunk[:] = work
                return
            cap *= 8

    threads = max(1, int(threads))
    if threads == 1 or samples.shape[0] < 2 * threads:
        run_chunk(batch)
    else:
        # chunks are views into batch, so workers write results in place
        chunks = np.array_split(batch, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_chunk, chunks))
    return batch.astype(np.int8), None


def replay_energy_drops(problem: IsingProblem, spins, report: CorrectionReport):
    """Re-play a flip trace, re-evaluating the objective after every flip.

    Returns the list of per-flip energy drops (before minus after), each of
    which must equal twice the recorded influence magnitude.  Raises
    ValueError if the replayed final energy differs from the report's.
    """
    q = validate_spins(problem.topology, spins).copy()
    drops = []
    e_prev = energy(problem, q)
    if abs(e_prev - report.initial_energy) > 1e-9:
        raise ValueError("replay does not start at the reported initial energy")
    for qubit_id, _ in report.flips:
        pos = problem.topology.position_of(qubit_id)
        q[pos] = -q[pos]
        e_next = energy(problem, q)
        drops.append(e_prev - e_next)
        e_prev = e_next
    if abs(e_prev - report.final_energy) > 1e-9:
        raise ValueError("replayed flips do not reproduce the reported final energy")
    return drops


def read_samples_file(path, topology) -> np.ndarray:
    """Load samples: one per line, space-separated -1/+1 entries in ascending
    qubit-id order over active qubits."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values = [int(tok) for tok in line.split()]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer spin value") from None
            if len(values) != topology.num_qubits:
                raise ValueError(
                    f"{path}:{lineno}: expected {topology.num_qubits} spins, got {len(values)}"
                )
            if any(v not in (-1, 1) for v in values):
                raise ValueError(f"{path}:{lineno}: spins must be -1 or +1")
            rows.append(values)
    return np.array(rows, dtype=np.int8).reshape(len(rows), topology.num_qubits)


def write_samples_file(path, samples) -> None:
    samples = np.asarray(samples, dtype=np.int8)
    with open(path, "w", encoding="utf-8") as fh:
        for row in samples:
            fh.write(" ".join(str(int(v)) for v in row))
            fh.write("\n")
