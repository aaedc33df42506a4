"""Shared helpers: independent brute-force oracles and canonical fixtures.

The oracles here deliberately avoid the package's evaluation paths (plain
Python loops instead of fsum/numpy/numba) so they can certify them.
"""

import itertools

import numpy as np
import pytest

from qcorrect import ChimeraTopology, IsingProblem, apply_mask, build_chimera


def naive_energy(problem: IsingProblem, spins) -> float:
    """Objective evaluated with plain Python accumulation."""
    total = 0.0
    for pos in range(problem.num_qubits):
        total += problem.a[pos] * spins[pos]
    for k, (pi, pj) in enumerate(problem.topology.coupler_positions):
        total += problem.b[k] * spins[pi] * spins[pj]
    return total


def naive_influences(problem: IsingProblem, spins):
    """Influence vector via direct loops over the coupler list."""
    out = [float(a) for a in problem.a]
    for k, (pi, pj) in enumerate(problem.topology.coupler_positions):
        out[pi] += problem.b[k] * spins[pj]
        out[pj] += problem.b[k] * spins[pi]
    return out


def brute_force_minima(problem: IsingProblem):
    """Exhaustive search with the naive evaluator; independent of the
    package's vectorized enumeration."""
    n = problem.num_qubits
    best = None
    states = []
    for combo in itertools.product((-1, 1), repeat=n):
        e = naive_energy(problem, combo)
        if best is None or e < best:
            best = e
            states = [combo]
        elif e == best:
            states.append(combo)
    return best, states


def path_problem(length: int, c_q: float, c_c: float) -> IsingProblem:
    """Symmetric chain with ids 0..length-1, so position == chain order."""
    topo = ChimeraTopology(
        range(length), [(i, i + 1) for i in range(length - 1)]
    )
    return IsingProblem(topo, np.full(length, c_q), np.full(max(length - 1, 0), c_c))


def two_qubit_problem(a0: float, a1: float, b: float) -> IsingProblem:
    topo = ChimeraTopology([0, 1], [(0, 1)])
    return IsingProblem(topo, [a0, a1], [b])


def c12_dead_set():
    """Deterministic mask that brings a (12,12,4) graph to exactly
    1097 qubits and 3060 couplers: 55 dead side-0 qubits from rows 0 and 2
    (none adjacent to each other), plus explicit coupler kills."""
    dead_qubits = []
    for c in range(12):
        for k in range(4):
            dead_qubits.append((0 * 12 + c) * 8 + k)
    for c in range(2):
        for k in range(4):
            if len(dead_qubits) < 55:
                dead_qubits.append((2 * 12 + c) * 8 + k)
    topo = apply_mask(build_chimera(12, 12, 4), dead_qubits)
    extra = topo.num_couplers - 3060
    dead_couplers = [tuple(int(v) for v in topo.couplers[i]) for i in range(extra)]
    return dead_qubits, dead_couplers


@pytest.fixture(scope="session")
def chimera_1x1():
    return build_chimera(1, 1, 4)


@pytest.fixture(scope="session")
def chimera_4x4():
    return build_chimera(4, 4, 4)


@pytest.fixture(scope="session")
def chimera_c12():
    return build_chimera(12, 12, 4)
