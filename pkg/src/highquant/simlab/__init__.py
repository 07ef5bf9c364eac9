"""Monte Carlo laboratory and command-line entry points."""

from .experiment import (
    CellResult,
    ExperimentConfig,
    SimulationSummary,
    SummaryRow,
    nearest_rank,
    run_cell,
    run_experiment,
)
from .output import figure_emit, read_summary, summary_to_csv
from .realdata import estimate_file, estimate_sample
from .sampling import exponentials, replication_seed, sample

__all__ = [
    "CellResult",
    "ExperimentConfig",
    "SimulationSummary",
    "SummaryRow",
    "nearest_rank",
    "run_cell",
    "run_experiment",
    "figure_emit",
    "read_summary",
    "summary_to_csv",
    "estimate_file",
    "estimate_sample",
    "exponentials",
    "replication_seed",
    "sample",
]
