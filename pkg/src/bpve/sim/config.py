"""Simulation configuration and result containers."""

from __future__ import annotations

import math
from dataclasses import dataclass

TERMINAL_EXTINCT = "Extinct"
TERMINAL_ALIVE = "AliveAtHorizon"
TERMINAL_CAP = "CapHit"

_WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class SimConfig:
    """Knobs shared by all Monte Carlo engines.

    ``population_cap`` bounds the materialized generation; crossing it ends
    the replica in its own terminal state (never silently counted as
    survived or extinct).  ``threads`` only distributes fixed replica blocks
    across workers; results are identical for every thread count because all
    draws are addressed by (seed, replica, generation, slot).
    """

    horizon: int
    replicas: int = 1
    population_cap: int = 10_000_000
    seed: int = 0
    threads: int = 1
    cap_policy: str = "stop-record"

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.population_cap < 1:
            raise ValueError("population_cap must be >= 1")
        if self.cap_policy != "stop-record":
            raise ValueError(f"unknown cap policy {self.cap_policy!r}")


@dataclass(frozen=True)
class BpveTrajectory:
    """One replica's population sizes Z_0..Z_T (stops at the terminal)."""

    sizes: tuple[int, ...]
    terminal: str
    terminal_generation: int

    def __post_init__(self):
        if self.sizes[0] != 1:
            raise ValueError("trajectories start with a single particle")


def wilson_interval(successes: int, total: int, z: float = _WILSON_Z) -> tuple[float, float]:
    if total <= 0:
        return (0.0, 1.0)
    p = successes / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2.0 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + z * z / (4.0 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SurvivalEstimate:
    """Estimates P(alive at horizon T), an upper bound on survival that is
    nonincreasing in T.  Cap-hit replicas are reported on their own, with
    ``p_hat`` counting them dead and ``p_hat_upper`` counting them alive, so
    callers can bound the estimand both ways."""

    horizon: int
    replicas: int
    survived: int
    extinct: int
    cap_hit: int
    p_hat: float
    ci: tuple[float, float]
    p_hat_upper: float
    ci_upper: tuple[float, float]

    @staticmethod
    def from_counts(horizon: int, survived: int, extinct: int, cap_hit: int) -> "SurvivalEstimate":
        total = survived + extinct + cap_hit
        return SurvivalEstimate(
            horizon=horizon,
            replicas=total,
            survived=survived,
            extinct=extinct,
            cap_hit=cap_hit,
            p_hat=survived / total,
            ci=wilson_interval(survived, total),
            p_hat_upper=(survived + cap_hit) / total,
            ci_upper=wilson_interval(survived + cap_hit, total),
        )

    def to_dict(self) -> dict:
        return {
            "estimand": "alive_at_horizon",
            "horizon": self.horizon,
            "replicas": self.replicas,
            "survived": self.survived,
            "extinct": self.extinct,
            "cap_hit": self.cap_hit,
            "p_hat": self.p_hat,
            "wilson_ci_95": list(self.ci),
            "p_hat_upper": self.p_hat_upper,
            "wilson_ci_95_upper": list(self.ci_upper),
        }


@dataclass(frozen=True)
class BpwsRun:
    """One selection-process replica: post-selection population sizes,
    leftmost labels (inf once empty), and per-generation counts inside the
    watched interval."""

    sizes: tuple[int, ...]
    leftmost: tuple[float, ...]
    watch_counts: tuple[int, ...]
    terminal: str
    terminal_generation: int
    lineage: tuple | None = None


@dataclass(frozen=True)
class PathCountResult:
    """Accessible-path statistics at fixed depth over many tree replicas."""

    depth: int
    replicas: int
    mean_paths: float
    p_access: float
    std_error: float

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "replicas": self.replicas,
            "mean_paths": self.mean_paths,
            "p_access": self.p_access,
            "std_error": self.std_error,
        }
