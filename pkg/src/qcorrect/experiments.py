"""Desk-reproducible studies: energy histograms under coefficient
quantization, and virtual-qubit probability sweeps with voting.

Both experiments compare uncorrected noisy samples against their corrected
counterparts; the chain sweep adds the exact ground-state sampler as the
errorless reference.  Every cell derives its own random stream, so results
are independent of execution order and thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .corrector import correct_batch
from .model import IsingProblem, Resolution, energy, quantize, random_problem
from .samplers import AnnealerConfig, chain_ground_marginals, sample_noisy
from .topology import ChimeraTopology, build_chimera, chain_subgraph

__all__ = [
    "HistogramResult",
    "SweepResult",
    "run_histogram_experiment",
    "histogram_for_problem",
    "run_chain_sweep",
    "curve_distance",
    "write_histogram_csv",
    "write_sweep_csv",
    "SOURCES",
    "METRICS",
]

SOURCES = ("raw", "corr", "theo")
METRICS = ("qubit", "vote")

CQ_RANGE = (-2.0, 2.0)
CC_RANGE = (-1.0, 1.0)

DEFAULT_BINS = 60


@dataclass(frozen=True)
class HistogramResult:
    """Shared-bin energy histograms of uncorrected and corrected samples."""

    bin_edges: np.ndarray
    uncorrected_counts: np.ndarray
    corrected_counts: np.ndarray
    resolution: Resolution
    num_samples: int


@dataclass(frozen=True)
class SweepResult:
    """P(q=1) grids over a coefficient sweep.

    `axis` is "cc" (x values are coupler coefficients, one curve per qubit
    coefficient) or "cq" (the transpose).  `probabilities` maps
    (source, metric) to a |curve_params| x |x_values| grid, with sources
    raw/corr/theo and metrics qubit (pooled per-qubit) and vote (majority
    over the chain).
    """

    axis: str
    x_values: np.ndarray
    curve_params: np.ndarray
    probabilities: dict[tuple[str, str], np.ndarray]


def _shared_histogram(
    uncorrected: np.ndarray, corrected: np.ndarray, num_bins: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if uncorrected.size == 0:
        edges = np.linspace(0.0, 1.0, num_bins + 1)
        zero = np.zeros(num_bins, dtype=np.int64)
        return edges, zero, zero.copy()
    lo = min(uncorrected.min(), corrected.min())
    hi = max(uncorrected.max(), corrected.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, num_bins + 1)
    u, _ = np.histogram(uncorrected, bins=edges)
    c, _ = np.histogram(corrected, bins=edges)
    return edges, u.astype(np.int64), c.astype(np.int64)


def histogram_for_problem(
    problem: IsingProblem,
    resolutions,
    num_samples: int,
    config: AnnealerConfig,
    num_bins: int = DEFAULT_BINS,
    threads: int = 1,
) -> list[HistogramResult]:
    """Histogram uncorrected vs corrected sample energies for one base
    problem at each quantization resolution."""
    results = []
    for resolution in resolutions:
        quantized = quantize(problem, resolution)
        cfg = replace(config, num_samples=num_samples)
        samples = sample_noisy(quantized, cfg)
        corrected, _ = correct_batch(quantized, samples, threads=threads)
        e_raw = np.array([energy(quantized, s) for s in samples])
        e_corr = np.array([energy(quantized, s) for s in corrected])
        edges, u, c = _shared_histogram(e_raw, e_corr, num_bins)
        results.append(
            HistogramResult(
                bin_edges=edges,
                uncorrected_counts=u,
                corrected_counts=c,
                resolution=resolution,
                num_samples=num_samples,
            )
        )
    return results


def run_histogram_experiment(
    topo: ChimeraTopology,
    seed: int,
    resolutions,
    num_samples: int,
    config: AnnealerConfig,
    num_bins: int = DEFAULT_BINS,
    threads: int = 1,
) -> list[HistogramResult]:
    """Generate one random problem on `topo` from `seed` and histogram it at
    every resolution; the same base coefficients are quantized at each."""
    base = random_problem(topo, seed)
    return histogram_for_problem(
        base, resolutions, num_samples, config, num_bins=num_bins, threads=threads
    )


def _chain_topology(length: int) -> ChimeraTopology:
    return chain_subgraph(build_chimera(max(length, 1), 1, 4), length)


def _cell_seed(seed: int, curve_index: int, x_index: int) -> int:
    return int(
        np.random.SeedSequence((seed, curve_index, x_index)).generate_state(
            1, np.uint64
        )[0]
    )


def run_chain_sweep(
    length: int,
    axis: str,
    x_grid,
    curve_values,
    num_samples: int,
    config: AnnealerConfig,
    threads: int = 1,
) -> SweepResult:
    """Sweep symmetric-chain coefficients and record P(q=1) per source.

    For every (curve value, x value) cell the chain problem assigns the
    same qubit coefficient everywhere and the same coupler coefficient
    everywhere, draws noisy samples, corrects them, and queries the exact
    ground-state summary.  Per-qubit probability pools all spins of all
    samples; vote probability is the fraction of samples with at least half
    their spins +1.
    """
    if num_samples < 1:
        raise ValueError(f"sweep needs num_samples >= 1, got {num_samples}")
    x_values = np.asarray(x_grid, dtype=np.float64)
    curve_params = np.asarray(curve_values, dtype=np.float64)
    if axis == "cc":
        x_lo, x_hi = CC_RANGE
        curve_lo, curve_hi = CQ_RANGE
    elif axis == "cq":
        x_lo, x_hi = CQ_RANGE
        curve_lo, curve_hi = CC_RANGE
    else:
        raise ValueError(f"axis must be 'cc' or 'cq', got {axis!r}")
    if x_values.size == 0 or curve_params.size == 0:
        raise ValueError("sweep grids must be non-empty")
    if x_values.min() < x_lo or x_values.max() > x_hi:
        raise ValueError(
            f"x grid outside [{x_lo}, {x_hi}] for axis {axis}"
        )
    if curve_params.min() < curve_lo or curve_params.max() > curve_hi:
        raise ValueError(
            f"curve values outside [{curve_lo}, {curve_hi}] for axis {axis}"
        )

    topo = _chain_topology(length)
    grids = {
        (src, metric): np.zeros((curve_params.size, x_values.size))
        for src in SOURCES
        for metric in METRICS
    }

    def run_cell(ci: int, xi: int) -> None:
        if axis == "cc":
            c_q, c_c = curve_params[ci], x_values[xi]
        else:
            c_q, c_c = x_values[xi], curve_params[ci]
        problem = IsingProblem(
            topo,
            np.full(topo.num_qubits, c_q),
            np.full(topo.num_couplers, c_c),
        )
        cfg = replace(
            config, num_samples=num_samples, seed=_cell_seed(config.seed, ci, xi)
        )
        samples = sample_noisy(problem, cfg)
        corrected, _ = correct_batch(problem, samples)
        for src, batch in (("raw", samples), ("corr", corrected)):
            plus = batch == 1
            grids[(src, "qubit")][ci, xi] = plus.mean()
            grids[(src, "vote")][ci, xi] = (
                2 * plus.sum(axis=1) >= length
            ).mean()
        summary = chain_ground_marginals(length, c_q, c_c)
        grids[("theo", "qubit")][ci, xi] = summary.per_qubit_plus_probability.mean()
        grids[("theo", "vote")][ci, xi] = summary.vote_plus_probability

    cells = [(ci, xi) for ci in range(curve_params.size) for xi in range(x_values.size)]
    threads = max(1, int(threads))
    if threads == 1:
        for ci, xi in cells:
            run_cell(ci, xi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda cell: run_cell(*cell), cells))

    return SweepResult(
        axis=axis,
        x_values=x_values,
        curve_params=curve_params,
        probabilities=grids,
    )


def curve_distance(
    result: SweepResult, source_a: str, source_b: str, metric: str = "qubit"
) -> float:
    """Mean absolute difference between two sources' probability grids."""
    for src in (source_a, source_b):
        if src not in SOURCES:
            raise ValueError(f"unknown source {src!r}")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    a = result.probabilities[(source_a, metric)]
    b = result.probabilities[(source_b, metric)]
    return float(np.mean(np.abs(a - b)))


def write_histogram_csv(result: HistogramResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("bin_low,bin_high,uncorrected,corrected\n")
        for k in range(result.uncorrected_counts.size):
            fh.write(
                f"{float(result.bin_edges[k])!r},{float(result.bin_edges[k + 1])!r},"
                f"{int(result.uncorrected_counts[k])},{int(result.corrected_counts[k])}\n"
            )


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("curve_param,x,src,metric,p\n")
        for ci, curve in enumerate(result.curve_params):
            for xi, x in enumerate(result.x_values):
                for src in SOURCES:
                    for metric in METRICS:
                        p = result.probabilities[(src, metric)][ci, xi]
                        fh.write(
                            f"{float(curve)!r},{float(x)!r},{src},{metric},{float(p)!r}\n"
                        )
