"""Ising problems over a topology: objective evaluation and quantization.

The objective over spins q_i in {-1, +1} is

    F(q) = sum_i a_i * q_i  +  sum_{(i,j)} b_ij * q_i * q_j

with each coupler counted once.  Qubit coefficients a_i lie in [-2, 2],
coupler coefficients b_ij in [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .topology import ChimeraTopology

__all__ = [
    "IsingProblem",
    "Resolution",
    "validate_spins",
    "energy",
    "quantize",
    "random_problem",
    "read_problem_file",
    "write_problem_file",
]

A_RANGE = 2.0
B_RANGE = 1.0


class IsingProblem:
    """Coefficient vectors bound to a topology.  Immutable after construction.

    `a` is indexed by position in `topology.active_qubits`, `b` by position
    in `topology.couplers`.  Ranges are validated on construction.
    """

    def __init__(self, topology: ChimeraTopology, a, b):
        a = np.ascontiguousarray(a, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        if a.shape != (topology.num_qubits,):
            raise ValueError(
                f"expected {topology.num_qubits} qubit coefficients, got {a.shape}"
            )
        if b.shape != (topology.num_couplers,):
            raise ValueError(
                f"expected {topology.num_couplers} coupler coefficients, got {b.shape}"
            )
        bad = np.flatnonzero(np.abs(a) > A_RANGE)
        if bad.size:
            qid = int(topology.active_qubits[bad[0]])
            raise ValueError(
                f"qubit coefficient {a[bad[0]]} for id {qid} outside [-2, 2]"
            )
        bad = np.flatnonzero(np.abs(b) > B_RANGE)
        if bad.size:
            i, j = (int(v) for v in topology.couplers[bad[0]])
            raise ValueError(
                f"coupler coefficient {b[bad[0]]} for ({i},{j}) outside [-1, 1]"
            )
        a.setflags(write=False)
        b.setflags(write=False)
        self.topology = topology
        self.a = a
        self.b = b

    @property
    def num_qubits(self) -> int:
        return self.topology.num_qubits

    @property
    def num_couplers(self) -> int:
        return self.topology.num_couplers

    def __repr__(self) -> str:
        return f"IsingProblem({self.num_qubits} qubits, {self.num_couplers} couplers)"


@dataclass(frozen=True)
class Resolution:
    """Coefficient quantization resolution: a positive integer, or infinity
    for unquantized reals.  Finite R restricts values to the lattice f/R
    with integer f in [-R, R]."""

    value: float

    def __post_init__(self):
        if math.isinf(self.value):
            if self.value < 0:
                raise ValueError("resolution must be positive")
            return
        if self.value != int(self.value) or self.value < 1:
            raise ValueError(f"resolution must be a positive integer or inf, got {self.value}")
        object.__setattr__(self, "value", float(int(self.value)))

    @classmethod
    def infinite(cls) -> "Resolution":
        return cls(math.inf)

    @classmethod
    def parse(cls, token: str) -> "Resolution":
        token = token.strip().lower()
        if token in ("inf", "infinity"):
            return cls.infinite()
        return cls(int(token))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else str(int(self.value))


def validate_spins(topology: ChimeraTopology, spins) -> np.ndarray:
    """Check one spin assignment and return it as an int8 array.

    Entries must be exactly -1 or +1, one per active qubit in ascending
    id order.
    """
    arr = np.asarray(spins)
    if arr.shape != (topology.num_qubits,):
        raise ValueError(
            f"expected {topology.num_qubits} spins, got shape {arr.shape}"
        )
    out = arr.astype(np.int8)
    if not np.array_equal(out, arr) or not np.all(np.abs(out) == 1):
        raise ValueError("spins must be exactly -1 or +1")
    return out


def energy(problem: IsingProblem, spins) -> float:
    """Objective value F for one sample, each coupler counted once.

    Terms are combined with exact compensated summation so the result does
    not depend on accumulation order.
    """
    q = validate_spins(problem.topology, spins).astype(np.float64)
    pi = problem.topology.coupler_positions[:, 0]
    pj = problem.topology.coupler_positions[:, 1]
    terms = np.concatenate([problem.a * q, problem.b * q[pi] * q[pj]])
    return math.fsum(terms)


def _round_half_away(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def quantize(problem: IsingProblem, resolution: Resolution) -> IsingProblem:
    """Restrict coefficients to the lattice f/R, rounding half away from zero.

    Qubit coefficients are scaled to [-1, 1] (divide by 2) before snapping
    to the lattice, then scaled back, so both coefficient families share the
    same lattice.  An infinite resolution returns the problem unchanged.
    """
    if resolution.is_infinite:
        return problem
    r = resolution.value
    a = 2.0 * (_round_half_away((problem.a / 2.0) * r) / r)
    b = _round_half_away(problem.b * r) / r
    return IsingProblem(problem.topology, a, b)


def random_problem(topology: ChimeraTopology, seed: int) -> IsingProblem:
    """Uniform random coefficients: a_i on [-2, 2], b_ij on [-1, 1].

    Deterministic per seed; qubit coefficients are drawn first.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(-A_RANGE, A_RANGE, size=topology.num_qubits)
    b = rng.uniform(-B_RANGE, B_RANGE, size=topology.num_couplers)
    return IsingProblem(topology, a, b)


def read_problem_file(path) -> IsingProblem:
    """Load a problem file, building its topology from the records.

    Format: `q <id> <a>` or `c <id> <id> <b>` per line, `#` comments.
    Out-of-range coefficients are rejected with the offending line number.
    """
    qubit_coeffs: dict[int, float] = {}
    coupler_coeffs: dict[tuple[int, int], float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "q" and len(parts) == 3:
                    qid, val = int(parts[1]), float(parts[2])
                    if qid in qubit_coeffs:
                        raise ValueError(f"{path}:{lineno}: duplicate qubit {qid}")
                    if abs(val) > A_RANGE:
                        raise ValueError(
                            f"{path}:{lineno}: qubit coefficient {val} outside [-2, 2]"
                        )
                    qubit_coeffs[qid] = val
                elif parts[0] == "c" and len(parts) == 4:
                    i, j, val = int(parts[1]), int(parts[2]), float(parts[3])
                    key = (min(i, j), max(i, j))
                    if key in coupler_coeffs:
                        raise ValueError(
                            f"{path}:{lineno}: duplicate coupler ({i},{j})"
                        )
                    if abs(val) > B_RANGE:
                        raise ValueError(
                            f"{path}:{lineno}: coupler coefficient {val} outside [-1, 1]"
                        )
                    coupler_coeffs[key] = val
                else:
                    raise ValueError(
                        f"{path}:{lineno}: expected 'q <id> <a>' or 'c <id> <id> <b>'"
                    )
            except ValueError as exc:
                if str(exc).startswith(str(path)):
                    raise
                raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from None
    for (i, j) in coupler_coeffs:
        for endpoint in (i, j):
            if endpoint not in qubit_coeffs:
                raise ValueError(
                    f"{path}: coupler ({i},{j}) references undeclared qubit {endpoint}"
                )
    topo = ChimeraTopology(list(qubit_coeffs), list(coupler_coeffs))
    a = np.array([qubit_coeffs[int(q)] for q in topo.active_qubits])
    b = np.array(
        [coupler_coeffs[(int(i), int(j))] for i, j in topo.couplers]
    ) if len(coupler_coeffs) else np.zeros(0)
    return IsingProblem(topo, a, b)


def write_problem_file(problem: IsingProblem, path) -> None:
    topo = problem.topology
    with open(path, "w", encoding="utf-8") as fh:
        for pos, qid in enumerate(topo.active_qubits):
            fh.write(f"q {int(qid)} {float(problem.a[pos])!r}\n")
        for k, (i, j) in enumerate(topo.couplers):
            fh.write(f"c {int(i)} {int(j)} {float(problem.b[k])!r}\n")
