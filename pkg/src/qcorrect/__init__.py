"""Post-processing correction of annealer spin samples.

Greedy influence-guided bit flips drive each sample to a certified local
minimum of the Ising objective.  The package also provides the Chimera
topology builder, a simulated noisy sampler, exact oracles, and the two
reference experiments (quantization histograms and chain sweeps).
"""

__version__ = "0.1.0"

from .corrector import (
    CorrectionReport,
    correct,
    correct_batch,
    flip_gain,
    influences,
    is_local_minimum,
    read_samples_file,
    replay_energy_drops,
    write_samples_file,
)
from .experiments import (
    HistogramResult,
    SweepResult,
    curve_distance,
    histogram_for_problem,
    run_chain_sweep,
    run_histogram_experiment,
    write_histogram_csv,
    write_sweep_csv,
)
from .model import (
    IsingProblem,
    Resolution,
    energy,
    quantize,
    random_problem,
    read_problem_file,
    validate_spins,
    write_problem_file,
)
from .samplers import (
    AnnealerConfig,
    GroundStateSummary,
    chain_ground_marginals,
    exact_minima,
    sample_noisy,
)
from .topology import (
    ChimeraTopology,
    apply_mask,
    build_chimera,
    chain_subgraph,
    coupler_count,
    read_mask_file,
    write_mask_file,
)

__all__ = [
    "__version__",
    "ChimeraTopology",
    "apply_mask",
    "build_chimera",
    "chain_subgraph",
    "coupler_count",
    "read_mask_file",
    "write_mask_file",
    "IsingProblem",
    "Resolution",
    "energy",
    "quantize",
    "random_problem",
    "read_problem_file",
    "write_problem_file",
    "validate_spins",
    "CorrectionReport",
    "influences",
    "flip_gain",
    "correct",
    "correct_batch",
    "is_local_minimum",
    "replay_energy_drops",
    "read_samples_file",
    "write_samples_file",
    "AnnealerConfig",
    "GroundStateSummary",
    "sample_noisy",
    "exact_minima",
    "chain_ground_marginals",
    "HistogramResult",
    "SweepResult",
    "run_histogram_experiment",
    "histogram_for_problem",
    "run_chain_sweep",
    "curve_distance",
    "write_histogram_csv",
    "write_sweep_csv",
]
