"""Sample sources: a simulated noisy annealer, an exhaustive oracle, and an
errorless ground-state sampler for symmetric chains.

The noisy sampler is Metropolis single-spin-flip annealing with a geometric
inverse-temperature schedule.  It stands in for imperfect hardware: any
source of tunable-quality low-energy samples exercises correction the same
way.  Each run draws from its own counter-based random stream derived from
(seed, run index), so results do not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .model import IsingProblem, energy

__all__ = [
    "AnnealerConfig",
    "GroundStateSummary",
    "sample_noisy",
    "exact_minima",
    "chain_ground_marginals",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 25
DEFAULT_SEED = 42


@dataclass(frozen=True)
class AnnealerConfig:
    """Schedule and sizing for the simulated noisy annealer."""

    sweeps: int = 100
    beta_initial: float = 0.1
    beta_final: float = 3.0
    seed: int = DEFAULT_SEED
    num_samples: int = 1000

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if not (self.beta_final >= self.beta_initial > 0):
            raise ValueError(
                f"need beta_final >= beta_initial > 0, got "
                f"{self.beta_initial} -> {self.beta_final}"
            )
        if self.num_samples < 0:
            raise ValueError(f"num_samples must be >= 0, got {self.num_samples}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")

    def schedule(self) -> np.ndarray:
        """Geometric interpolation from beta_initial to beta_final, one value
        per sweep.  A single sweep runs at beta_final."""
        if self.sweeps == 1:
            return np.array([self.beta_final])
        ratio = self.beta_final / self.beta_initial
        t = np.arange(self.sweeps) / (self.sweeps - 1)
        return self.beta_initial * ratio**t


@dataclass(frozen=True)
class GroundStateSummary:
    """Exact ground-state statistics of a symmetric chain.

    Probabilities are uniform over the degenerate ground states.  The
    per-qubit vector is indexed by chain position.  Exact integer counts
    back every probability: `plus_counts[p]` ground states have +1 at
    position p, `vote_count` have at least half their spins +1, and
    `magnetization_counts[m]` have exactly m spins +1.
    """

    min_energy: float
    degeneracy: int
    per_qubit_plus_probability: np.ndarray
    vote_plus_probability: float
    plus_counts: tuple[int, ...] = field(repr=False)
    vote_count: int = field(repr=False)
    magnetization_counts: tuple[int, ...] = field(repr=False)


@njit(cache=True, nogil=True, inline="always")
def _mix64(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, nogil=True)
def _anneal_runs(out, run_seeds, a, adj_offsets, adj_neighbor, adj_coeff, betas):
    n = a.shape[0]
    q = np.empty(n, np.float64)
    for r in range(out.shape[0]):
        state = run_seeds[r]
        for i in range(n):
            state, z = _mix64(state)
            q[i] = 1.0 if (z >> np.uint64(63)) else -1.0
        for t in range(betas.shape[0]):
            beta = betas[t]
            for i in range(n):
                infl = a[i]
                for e in range(adj_offsets[i], adj_offsets[i + 1]):
                    infl += adj_coeff[e] * q[adj_neighbor[e]]
                delta = -2.0 * infl * q[i]
                if delta <= 0.0:
                    q[i] = -q[i]
                else:
                    state, z = _mix64(state)
                    u = (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)
                    if u < np.exp(-beta * delta):
                        q[i] = -q[i]
        for i in range(n):
            out[r, i] = np.int8(1) if q[i] > 0.0 else np.int8(-1)


def _run_seeds(seed: int, num_samples: int) -> np.ndarray:
    seeds = np.empty(num_samples, dtype=np.uint64)
    for r in range(num_samples):
        seeds[r] = np.random.SeedSequence((seed, r)).generate_state(1, np.uint64)[0]
    return seeds


def sample_noisy(problem: IsingProblem, config: AnnealerConfig) -> np.ndarray:
    """Draw config.num_samples annealed samples, one row per run.

    Each run starts from a uniform random state and executes config.sweeps
    full-lattice Metropolis sweeps along the geometric beta schedule.
    Deterministic per (seed, run index).
    """
    topo = problem.topology
    out = np.empty((config.num_samples, topo.num_qubits), dtype=np.int8)
    if config.num_samples == 0 or topo.num_qubits == 0:
        return out
    _anneal_runs(
        out,
        _run_seeds(config.seed, config.num_samples),
        problem.a,
        topo.adj_offsets,
        topo.adj_neighbor_pos,
        problem.b[topo.adj_coupler_index],
        config.schedule(),
    )
    return out


def exact_minima(problem: IsingProblem) -> tuple[float, list[np.ndarray]]:
    """Exhaustively enumerate the global minimum energy and every attaining
    state.  Limited to 25 active qubits; larger problems raise with a hint
    to use the chain solver or sampling instead."""
    n = problem.num_qubits
    if n > ENUMERATION_LIMIT:
        raise ValueError(
            f"{n} qubits exceeds the {ENUMERATION_LIMIT}-qubit enumeration limit; "
            "use chain_ground_marginals for chains or sample_noisy instead"
        )
    pi = problem.topology.coupler_positions[:, 0]
    pj = problem.topology.coupler_positions[:, 1]
    bits = np.arange(n, dtype=np.uint32)
    best: float | None = None
    states: list[np.ndarray] = []
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, start + chunk, dtype=np.uint32)
        ones = ((idx[:, None] >> bits) & 1).astype(np.int64)
        spins = (2 * ones - 1).astype(np.float64)
        energies = spins @ problem.a
        if problem.num_couplers:
            energies = energies + (spins[:, pi] * spins[:, pj]) @ problem.b
        lo = float(energies.min())
        if best is None or lo < best:
            best = lo
            states = []
        if lo <= best:
            hits = np.flatnonzero(energies == best)
            states.extend(spins[h].astype(np.int8) for h in hits)
    # report the minimum through the same compensated path used everywhere else
    return energy(problem, states[0]), states


def _chain_energy_tables(length: int, cq: Fraction, cc: Fraction):
    """Forward and backward minimal prefix/suffix energies per (position, spin),
    with counts of minimizing prefixes/suffixes.  Spin index 0 is -1, 1 is +1."""
    spin_vals = (Fraction(-1), Fraction(1))
    e_fwd = [[None, None] for _ in range(length)]
    c_fwd = [[0, 0] for _ in range(length)]
    for s in range(2):
        e_fwd[0][s] = cq * spin_vals[s]
        c_fwd[0][s] = 1
    for p in range(1, length):
        for s in range(2):
            best = None
            count = 0
            for prev in range(2):
                cand = e_fwd[p - 1][prev] + cq * spin_vals[s] + cc * spin_vals[prev] * spin_vals[s]
                if best is None or cand < best:
                    best, count = cand, c_fwd[p - 1][prev]
                elif cand == best:
                    count += c_fwd[p - 1][prev]
            e_fwd[p][s] = best
            c_fwd[p][s] = count
    e_bwd = [[None, None] for _ in range(length)]
    c_bwd = [[0, 0] for _ in range(length)]
    for s in range(2):
        e_bwd[length - 1][s] = cq * spin_vals[s]
        c_bwd[length - 1][s] = 1
    for p in range(length - 2, -1, -1):
        for s in range(2):
            best = None
            count = 0
            for nxt in range(2):
                cand = e_bwd[p + 1][nxt] + cq * spin_vals[s] + cc * spin_vals[s] * spin_vals[nxt]
                if best is None or cand < best:
                    best, count = cand, c_bwd[p + 1][nxt]
                elif cand == best:
                    count += c_bwd[p + 1][nxt]
            e_bwd[p][s] = best
            c_bwd[p][s] = count
    return spin_vals, e_fwd, c_fwd, e_bwd, c_bwd


def chain_ground_marginals(length: int, c_q: float, c_c: float) -> GroundStateSummary:
    """Exact ground-state marginals of the symmetric open chain.

    All qubit coefficients equal c_q, all couplers equal c_c.  Dynamic
    programming over the path graph runs in exact rational arithmetic, so
    degeneracy, per-position counts, and the vote count (states with at
    least half their spins +1) are exact integers.
    """
    if length < 1:
        raise ValueError(f"chain length must be >= 1, got {length}")
    cq, cc = Fraction(c_q), Fraction(c_c)
    spin_vals, e_fwd, c_fwd, e_bwd, c_bwd = _chain_energy_tables(length, cq, cc)

    ground = min(e_fwd[length - 1])

    # position marginals: a ground state passes (p, s) iff minimal prefix plus
    # minimal suffix energies meet the ground energy (field at p counted once)
    plus_counts = []
    degeneracy = None
    for p in range(length):
        through = [0, 0]
        for s in range(2):
            if e_fwd[p][s] + e_bwd[p][s] - cq * spin_vals[s] == ground:
                through[s] = c_fwd[p][s] * c_bwd[p][s]
        total = through[0] + through[1]
        if degeneracy is None:
            degeneracy = total
        plus_counts.append(through[1])

    # magnetization-resolved minima for the voting statistic
    NEG, POS = 0, 1
    e_mag = [[None] * (length + 1) for _ in range(2)]
    c_mag = [[0] * (length + 1) for _ in range(2)]
    e_mag[NEG][0] = cq * spin_vals[NEG]
    c_mag[NEG][0] = 1
    e_mag[POS][1] = cq * spin_vals[POS]
    c_mag[POS][1] = 1
    for p in range(1, length):
        e_next = [[None] * (length + 1) for _ in range(2)]
        c_next = [[0] * (length + 1) for _ in range(2)]
        for s in range(2):
            for m in range(p + 1):
                if e_mag[s][m] is None:
                    continue
                for s2 in range(2):
                    m2 = m + (1 if s2 == POS else 0)
                    cand = e_mag[s][m] + cq * spin_vals[s2] + cc * spin_vals[s] * spin_vals[s2]
                    if e_next[s2][m2] is None or cand < e_next[s2][m2]:
                        e_next[s2][m2] = cand
                        c_next[s2][m2] = c_mag[s][m]
                    elif cand == e_next[s2][m2]:
                        c_next[s2][m2] += c_mag[s][m]
        e_mag, c_mag = e_next, c_next
    magnetization_counts = [0] * (length + 1)
    for m in range(length + 1):
        for s in range(2):
            if e_mag[s][m] is not None and e_mag[s][m] == ground:
                magnetization_counts[m] += c_mag[s][m]
    total_states = sum(magnetization_counts)
    assert degeneracy == total_states
    vote_count = sum(
        magnetization_counts[m] for m in range(length + 1) if 2 * m >= length
    )

    return GroundStateSummary(
        min_energy=float(ground),
        degeneracy=degeneracy,
        per_qubit_plus_probability=np.array(
            [float(Fraction(c, degeneracy)) for c in plus_counts]
        ),
        vote_plus_probability=float(Fraction(vote_count, degeneracy)),
        plus_counts=tuple(plus_counts),
        vote_count=vote_count,
        magnetization_counts=tuple(magnetization_counts),
    )
