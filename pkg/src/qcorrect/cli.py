"""Command-line surface: build/load problems, sample, correct, run experiments.

Every command is deterministic given its flags; seeds default to a fixed
constant so bare invocations are reproducible.  Experiment commands write
their CSV outputs plus a JSON run manifest listing parameters and produced
files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from math import fsum

import numpy as np

from . import __version__
from .corrector import correct_batch, is_local_minimum, read_samples_file, write_samples_file
from .experiments import (
    histogram_for_problem,
    run_chain_sweep,
    run_histogram_experiment,
    write_histogram_csv,
    write_sweep_csv,
)
from .model import Resolution, energy, random_problem, read_problem_file, write_problem_file
from .samplers import AnnealerConfig, sample_noisy
from .topology import apply_mask, build_chimera, read_mask_file

DEFAULT_SEED = 42


@dataclass(frozen=True)
class RunManifest:
    """Record of one command invocation and the files it produced."""

    command: str
    parameters: dict
    seed: int
    tool_version: str = __version__
    output_paths: list[str] = field(default_factory=list)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("QCORRECT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"QCORRECT_THREADS must be an integer, got {env!r}")
    return 1


def _config(args, num_samples: int | None = None) -> AnnealerConfig:
    return AnnealerConfig(
        sweeps=args.sweeps,
        beta_initial=args.beta_initial,
        beta_final=args.beta_final,
        seed=args.seed,
        num_samples=args.num_samples if num_samples is None else num_samples,
    )


def _add_schedule_flags(parser, num_samples_default=1000):
    parser.add_argument("--num-samples", type=int, default=num_samples_default)
    parser.add_argument("--sweeps", type=int, default=100)
    parser.add_argument("--beta-initial", type=float, default=0.1)
    parser.add_argument("--beta-final", type=float, default=3.0)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _build_topology(args):
    topo = build_chimera(args.rows, args.cols, args.shore)
    if args.mask:
        dead_q, dead_c = read_mask_file(args.mask)
        topo = apply_mask(topo, dead_q, dead_c)
    return topo


def _manifest_path(out: str) -> str:
    stem = out[:-4] if out.endswith(".csv") else out
    return stem + ".manifest.json"


def cmd_correct(args) -> int:
    problem = read_problem_file(args.problem)
    samples = read_samples_file(args.samples, problem.topology)
    record = args.report is not None
    corrected, reports = correct_batch(
        problem, samples, record=record, threads=_threads(args)
    )
    for row in corrected:
        if not is_local_minimum(problem, row):
            print("error: correction produced a non-minimal sample", file=sys.stderr)
            return 1
    write_samples_file(args.out, corrected)
    if record:
        report_path = args.report if args.report else args.out + ".report.csv"
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write("initial_F,final_F,flips,hamming\n")
            for rep in reports:
                fh.write(
                    f"{rep.initial_energy!r},{rep.final_energy!r},"
                    f"{len(rep.flips)},{rep.hamming_distance}\n"
                )
    print(f"corrected {corrected.shape[0]} samples -> {args.out}")
    return 0


def cmd_sample(args) -> int:
    problem = read_problem_file(args.problem)
    samples = sample_noisy(problem, _config(args))
    write_samples_file(args.out, samples)
    if samples.shape[0]:
        energies = [energy(problem, s) for s in samples]
        print(
            f"F min={min(energies)!r} mean={fsum(energies) / len(energies)!r} "
            f"max={max(energies)!r}"
        )
    else:
        print("0 samples")
    return 0


def cmd_random_problem(args) -> int:
    topo = _build_topology(args)
    problem = random_problem(topo, args.seed)
    write_problem_file(problem, args.out)
    print(
        f"wrote {problem.num_qubits} qubit and {problem.num_couplers} coupler "
        f"coefficients -> {args.out}"
    )
    return 0


def cmd_histogram(args) -> int:
    resolutions = [Resolution.parse(tok) for tok in args.resolutions.split(",") if tok]
    if not resolutions:
        raise ValueError("--resolutions must list at least one value")
    config = _config(args)
    if args.problem:
        problem = read_problem_file(args.problem)
        results = histogram_for_problem(
            problem,
            resolutions,
            args.num_samples,
            config,
            num_bins=args.bins,
            threads=_threads(args),
        )
    else:
        topo = _build_topology(args)
        results = run_histogram_experiment(
            topo,
            args.seed,
            resolutions,
            args.num_samples,
            config,
            num_bins=args.bins,
            threads=_threads(args),
        )
    outputs = []
    for result in results:
        path = f"{args.out}_r{result.resolution}.csv"
        write_histogram_csv(result, path)
        outputs.append(path)
    manifest = RunManifest(
        command="experiment histogram",
        parameters={
            "problem": args.problem,
            "rows": args.rows,
            "cols": args.cols,
            "shore": args.shore,
            "mask": args.mask,
            "resolutions": args.resolutions,
            "num_samples": args.num_samples,
            "sweeps": args.sweeps,
            "beta_initial": args.beta_initial,
            "beta_final": args.beta_final,
            "bins": args.bins,
            "out": args.out,
        },
        seed=args.seed,
        output_paths=outputs,
    )
    manifest.write(_manifest_path(args.out))
    print(f"wrote {len(outputs)} histogram files and {_manifest_path(args.out)}")
    return 0


def cmd_chain_sweep(args) -> int:
    if args.axis == "cc":
        x_lo, x_hi = -1.0, 1.0
        curve_lo, curve_hi = -2.0, 2.0
    else:
        x_lo, x_hi = -2.0, 2.0
        curve_lo, curve_hi = -1.0, 1.0
    x_lo = x_lo if args.x_min is None else args.x_min
    x_hi = x_hi if args.x_max is None else args.x_max
    curve_lo = curve_lo if args.curve_min is None else args.curve_min
    curve_hi = curve_hi if args.curve_max is None else args.curve_max
    x_grid = np.linspace(x_lo, x_hi, args.x_points)
    curves = np.linspace(curve_lo, curve_hi, args.curves)
    result = run_chain_sweep(
        args.length,
        args.axis,
        x_grid,
        curves,
        args.num_samples,
        _config(args),
        threads=_threads(args),
    )
    write_sweep_csv(result, args.out)
    manifest = RunManifest(
        command="experiment chain-sweep",
        parameters={
            "length": args.length,
            "axis": args.axis,
            "x_points": args.x_points,
            "curves": args.curves,
            "x_min": x_lo,
            "x_max": x_hi,
            "curve_min": curve_lo,
            "curve_max": curve_hi,
            "num_samples": args.num_samples,
            "sweeps": args.sweeps,
            "beta_initial": args.beta_initial,
            "beta_final": args.beta_final,
            "out": args.out,
        },
        seed=args.seed,
        output_paths=[args.out],
    )
    manifest.write(_manifest_path(args.out))
    print(f"wrote {args.out} and {_manifest_path(args.out)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorrect",
        description="Drive annealer spin samples to certified local minima "
        "of the Ising objective, and reproduce the reference experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correct", help="correct samples to local minima")
    p.add_argument("--problem", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", nargs="?", const="", default=None,
                   help="also write per-sample initial_F,final_F,flips,hamming CSV")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(handler=cmd_correct)

    p = sub.add_parser("sample", help="draw noisy annealed samples")
    p.add_argument("--problem", required=True)
    p.add_argument("--out", required=True)
    _add_schedule_flags(p)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("random-problem", help="write a random problem file")
    p.add_argument("--rows", type=int, default=12)
    p.add_argument("--cols", type=int, default=12)
    p.add_argument("--shore", type=int, default=4)
    p.add_argument("--mask", default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_random_problem)

    exp = sub.add_parser("experiment", help="run a reference experiment")
    exp_sub = exp.add_subparsers(dest="experiment", required=True)

    p = exp_sub.add_parser("histogram", help="energy histograms across resolutions")
    p.add_argument("--problem", default=None,
                   help="base problem file; otherwise a random problem is built")
    p.add_argument("--rows", type=int, default=12)
    p.add_argument("--cols", type=int, default=12)
    p.add_argument("--shore", type=int, default=4)
    p.add_argument("--mask", default=None)
    p.add_argument("--resolutions", default="inf,100,32")
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--out", default="histogram",
                   help="output prefix; one CSV per resolution")
    p.add_argument("--threads", type=int, default=None)
    _add_schedule_flags(p)
    p.set_defaults(handler=cmd_histogram)

    p = exp_sub.add_parser("chain-sweep", help="virtual-qubit probability sweep")
    p.add_argument("--length", type=int, default=12)
    p.add_argument("--axis", choices=("cc", "cq"), default="cc")
    p.add_argument("--x-points", type=int, default=129)
    p.add_argument("--curves", type=int, default=17)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--curve-min", type=float, default=None)
    p.add_argument("--curve-max", type=float, default=None)
    p.add_argument("--out", default="chain_sweep.csv")
    p.add_argument("--threads", type=int, default=None)
    _add_schedule_flags(p)
    p.set_defaults(handler=cmd_chain_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
