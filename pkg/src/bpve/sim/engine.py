"""Population-process Monte Carlo engines.

Two entry points with two stream layouts, both counter-addressed:

* ``estimate_survival`` runs all replicas in lockstep, one whole-generation
  total per replica per generation, drawn by quantile inversion from the
  uniform at counter (replica, generation, slot).  This is the fast path for
  survival estimates; it vectorizes across replicas and parallelizes over
  fixed replica blocks without changing a single draw.
* ``run_bpve`` materializes one replica's trajectory with per-particle
  counts, sharing its count stream with the selection engine so that a
  selection run with the culling switched off reproduces the exact same
  population sizes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import rng
from ..laws import Schedule
from .config import (
    TERMINAL_ALIVE,
    TERMINAL_CAP,
    TERMINAL_EXTINCT,
    BpveTrajectory,
    SimConfig,
    SurvivalEstimate,
)

__all__ = ["estimate_survival", "run_bpve"]

_BLOCK = 1 << 16
_CHUNK = 1 << 20

_RUNNING, _EXTINCT, _CAP, _ALIVE = 0, 1, 2, 3


def _run_replica_block(schedule: Schedule, config: SimConfig, key: np.ndarray,
                       lo: int, hi: int, status_out: np.ndarray) -> None:
    n_rep = hi - lo
    replica_ids = np.arange(lo, hi, dtype=np.uint64)
    z = np.ones(n_rep, dtype=np.float64)
    status = np.full(n_rep, _RUNNING, dtype=np.int8)
    cap = float(config.population_cap)
    for n in range(config.horizon):
        active = status == _RUNNING
        if not active.any():
            break
        law = schedule.law(n)
        width = law.sum_uniform_count()
        ids = replica_ids[active]
        u = np.empty((ids.size, width), dtype=np.float64)
        for slot in range(width):
            u[:, slot] = rng.uniforms_at(key, ids, n, slot)
        totals = np.asarray(law.sum_ppf(u, z[active]), dtype=np.float64)
        sub = status[active]
        sub[totals == 0.0] = _EXTINCT
        sub[totals > cap] = _CAP
        status[active] = sub
        z[active] = totals
    status[status == _RUNNING] = _ALIVE
    status_out[lo:hi] = status


def estimate_survival(schedule: Schedule, config: SimConfig) -> SurvivalEstimate:
    """Fraction of replicas alive at the horizon, with Wilson intervals and
    cap-hit replicas accounted separately."""
    key = rng.derive_key(config.seed, rng.KIND_ENSEMBLE)
    status = np.empty(config.replicas, dtype=np.int8)
    spans = [(lo, min(lo + _BLOCK, config.replicas))
             for lo in range(0, config.replicas, _BLOCK)]
    if config.threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futures = [pool.submit(_run_replica_block, schedule, config, key, lo, hi, status)
                       for lo, hi in spans]
            for f in futures:
                f.result()
    else:
        for lo, hi in spans:
            _run_replica_block(schedule, config, key, lo, hi, status)
    return SurvivalEstimate.from_counts(
        horizon=config.horizon,
        survived=int(np.sum(status == _ALIVE)),
        extinct=int(np.sum(status == _EXTINCT)),
        cap_hit=int(np.sum(status == _CAP)),
    )


def generation_counts(schedule: Schedule, key: np.ndarray, replica: int,
                      generation: int, parents: int, cap: float) -> tuple[float, np.ndarray | None]:
    """Per-particle offspring counts of one generation, chunked with early
    cap detection.  Returns (total, counts) where counts is None once the
    total crossed the cap."""
    law = schedule.law(generation)
    total = 0.0
    pieces = []
    for start in range(0, parents, _CHUNK):
        count = min(_CHUNK, parents - start)
        u = rng.uniform_block(key, replica, generation, count, start=start)
        c = law.ppf(u)
        pieces.append(c)
        total += float(np.sum(c))
        if total > cap:
            return total, None
    return total, np.concatenate(pieces) if pieces else np.empty(0, dtype=np.int64)


def run_bpve(schedule: Schedule, config: SimConfig, replica: int = 0) -> BpveTrajectory:
    """One replica's trajectory from a single particle at generation 0."""
    key = rng.derive_key(config.seed, rng.KIND_COUNTS)
    cap = float(config.population_cap)
    sizes = [1]
    z = 1
    for n in range(config.horizon):
        total, _ = generation_counts(schedule, key, replica, n, z, cap)
        if total > cap:
            return BpveTrajectory(tuple(sizes), TERMINAL_CAP, n + 1)
        z = int(total)
        sizes.append(z)
        if z == 0:
            return BpveTrajectory(tuple(sizes), TERMINAL_EXTINCT, n + 1)
    return BpveTrajectory(tuple(sizes), TERMINAL_ALIVE, config.horizon)
