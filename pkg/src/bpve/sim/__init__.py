"""Monte Carlo engines: population trajectories, selection dynamics, and
accessible-path counting, all on counter-addressed random streams."""

from .bpws import (
    LocalSurvivalEstimate,
    estimate_bpws_survival,
    estimate_local_survival,
    run_bpws,
)
from .config import (
    TERMINAL_ALIVE,
    TERMINAL_CAP,
    TERMINAL_EXTINCT,
    BpveTrajectory,
    BpwsRun,
    PathCountResult,
    SimConfig,
    SurvivalEstimate,
    wilson_interval,
)
from .engine import estimate_survival, run_bpve
from .percolation import accessible_path_counts, count_accessible_paths

__all__ = [
    "SimConfig",
    "BpveTrajectory",
    "BpwsRun",
    "PathCountResult",
    "SurvivalEstimate",
    "LocalSurvivalEstimate",
    "TERMINAL_ALIVE",
    "TERMINAL_CAP",
    "TERMINAL_EXTINCT",
    "estimate_survival",
    "run_bpve",
    "run_bpws",
    "estimate_bpws_survival",
    "estimate_local_survival",
    "count_accessible_paths",
    "accessible_path_counts",
    "wilson_interval",
]
