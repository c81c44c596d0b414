"""Survival and extinction analysis for branching processes in varying
environment, their selection variant, and accessible-path percolation,
with an independent Monte Carlo engine cross-checking every analytic
verdict."""

__version__ = "0.1.0"

from . import criteria, genfun, laws, rng, series, sim

__all__ = ["laws", "genfun", "criteria", "sim", "rng", "series", "__version__"]
