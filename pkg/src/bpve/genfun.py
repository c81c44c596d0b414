"""Generating-function analysis for varying-environment branching processes.

The central objects:

* ``ExtinctionCurve`` -- exact backward recursion e[j] = pgf_j(e[j+1]) giving
  the probability of extinction by a finite horizon from any starting
  generation.  The curve is monotone in the horizon, so results are reported
  as a bracket [e_N[0], 1) plus a gap diagnostic, never as a converged limit.
* ``AgrestiBound`` -- the fractional-linear upper bound on a pgf built from
  its first two moments; tight at 1.
* ``BetaSequence`` -- the nondecreasing partial sums combining inverse
  mean-products with second-moment excess terms; boundedness of this
  sequence is the survival condition the criteria module certifies.
* ``SurvivalCertificate`` -- a sequence q with q(n0) < 1 and
  pgf_n(q(n+1)) <= q(n) on the covered window, witnessing positive survival
  probability.  Built from truncated beta limits via the exact backward
  recursion b_n = b_{n+1}/m_n + (m2_n - m_n)/m_n^2.

All running mean-products are carried in log-space; schedules whose moments
overflow doubles degrade to inf partial sums (detected as divergence) rather
than crashing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laws import Schedule

__all__ = [
    "ExtinctionCurve",
    "extinction_curve",
    "AgrestiBound",
    "agresti_bound",
    "agresti_eval",
    "BetaSequence",
    "beta_sequence",
    "SurvivalCertificate",
    "build_survival_certificate",
    "verify_certificate",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ExtinctionCurve:
    """e[j] = P(extinct by ``horizon`` | one particle in generation j)."""

    horizon: int
    values: tuple[float, ...]
    gap: float

    def __getitem__(self, j: int) -> float:
        return self.values[j]


def _backward(schedule: Schedule, horizon: int) -> list[float]:
    e = [0.0] * (horizon + 1)
    for j in range(horizon - 1, -1, -1):
        e[j] = float(schedule.law(j).pgf(e[j + 1]))
    return e


def extinction_curve(schedule: Schedule, horizon: int) -> ExtinctionCurve:
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    e = _backward(schedule, horizon)
    gap = e[0] - _backward(schedule, horizon // 2)[0] if horizon >= 2 else e[0]
    return ExtinctionCurve(horizon=horizon, values=tuple(e), gap=gap)


@dataclass(frozen=True)
class AgrestiBound:
    """f(x) = 1 - b/(1-c) + b*x/(1-c*x) with f >= pgf on [0, 1], f(1) = 1."""

    b: float
    c: float


def agresti_bound(law) -> AgrestiBound:
    m = law.mean
    m2 = law.second_moment
    if not math.isfinite(m2):
        raise ValueError("second moment must be finite for the moment bound")
    return AgrestiBound(b=m**3 / m2**2, c=(m2 - m) / m2)


def agresti_eval(bound: AgrestiBound, x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("bound argument must lie in [0, 1]")
    return 1.0 - bound.b / (1.0 - bound.c) + bound.b * x / (1.0 - bound.c * x)


@dataclass(frozen=True)
class BetaSequence:
    """Partial sums S and beta values for one anchor, carried in log-space.

    Index l of the arrays corresponds to generation ``anchor + l``.
    """

    anchor: int
    log_partial_sums: np.ndarray
    log_beta: np.ndarray

    @property
    def partial_sums(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_partial_sums)

    @property
    def beta(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_beta)

    def __len__(self) -> int:
        return len(self.log_beta)


def moment_arrays(schedule: Schedule, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second moments for generations lo..hi inclusive."""
    m = np.empty(hi - lo + 1)
    m2 = np.empty(hi - lo + 1)
    for idx, n in enumerate(range(lo, hi + 1)):
        m[idx] = schedule.mean(n)
        m2[idx] = schedule.second_moment(n)
    return m, m2


def beta_sequence(schedule: Schedule, anchor: int, length: int) -> BetaSequence:
    if anchor < 0 or length < 0:
        raise ValueError("anchor and length must be nonnegative")
    m, m2 = moment_arrays(schedule, anchor, anchor + length)
    if np.any(m <= 0.0) or not np.all(np.isfinite(m)):
        raise ValueError("schedule means must be positive and finite")
    log_prod = np.cumsum(np.log(m))
    with np.errstate(divide="ignore", invalid="ignore"):
        excess = (m2 - m) / m
        log_terms = np.where(excess > 0.0, np.log(np.maximum(excess, 1e-320)), -np.inf)
        log_terms = np.where(np.isinf(m2), np.inf, log_terms)
    log_terms = log_terms - log_prod
    log_s = np.logaddexp.accumulate(log_terms)
    log_beta = np.logaddexp(log_s, -log_prod)
    if np.any(np.isnan(log_beta)):
        raise OverflowError("beta sequence exceeded log-space range")
    diffs = np.diff(log_beta[np.isfinite(log_beta)])
    if diffs.size and diffs.min() < -1e-9:
        raise AssertionError("beta sequence lost monotonicity (numerical fault)")
    return BetaSequence(anchor=anchor, log_partial_sums=log_s, log_beta=log_beta)


@dataclass(frozen=True)
class SurvivalCertificate:
    """Witness q(n) = 1 - 1/b(n) for n in [n0, horizon].

    ``b[i]`` is the beta limit for generation n0+i truncated at ``horizon``;
    since beta is nondecreasing this is a certified lower bound on the true
    limit.  ``slack[i] = q[n0+i] - pgf_{n0+i}(q[n0+i+1])`` is recomputed with
    exact pgfs; the certificate is valid when every slack clears
    ``-tolerance`` and q(n0) stays below 1 by at least ``tolerance`` (so a
    beta sequence that was still diverging at the horizon is flagged rather
    than silently accepted).  ``truncation_gap`` is the last beta increment.
    """

    n0: int
    horizon: int
    tolerance: float
    b: tuple[float, ...]
    q: tuple[float, ...]
    slack: tuple[float, ...]
    valid: bool
    truncation_gap: float

    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "K": self.horizon,
            "tolerance": self.tolerance,
            "b": list(self.b),
            "q": list(self.q),
            "slack": list(self.slack),
            "valid": self.valid,
            "truncation_gap": self.truncation_gap,
        }


def certificate_from_dict(payload: dict) -> SurvivalCertificate:
    return SurvivalCertificate(
        n0=int(payload["n0"]),
        horizon=int(payload["K"]),
        tolerance=float(payload["tolerance"]),
        b=tuple(payload["b"]),
        q=tuple(payload["q"]),
        slack=tuple(payload["slack"]),
        valid=bool(payload["valid"]),
        truncation_gap=float(payload.get("truncation_gap", math.nan)),
    )


def build_survival_certificate(
    schedule: Schedule,
    n0: int = 0,
    horizon: int | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> SurvivalCertificate:
    if horizon is None:
        horizon = 10 * n0 + 200
    if horizon <= n0:
        raise ValueError("horizon must exceed n0")
    m, m2 = moment_arrays(schedule, n0, horizon)
    count = horizon - n0 + 1
    b = np.empty(count)
    with np.errstate(over="ignore", invalid="ignore"):
        b[-1] = m2[-1] / m[-1] ** 2
        for i in range(count - 2, -1, -1):
            b[i] = b[i + 1] / m[i] + (m2[i] - m[i]) / m[i] ** 2
        q = np.where(np.isfinite(b), 1.0 - 1.0 / b, 1.0)
    q = np.clip(q, 0.0, 1.0)
    slack = np.empty(count - 1)
    for i in range(count - 1):
        slack[i] = q[i] - float(schedule.law(n0 + i).pgf(q[i + 1]))
    # last increment of beta at the anchor: (m2_K/m_K^2 - 1) / prod m_i
    log_prod = float(np.sum(np.log(m[:-1])))
    ratio = m2[-1] / m[-1] ** 2 - 1.0
    if math.isfinite(ratio) and ratio > 0.0:
        gap = math.exp(min(math.log(ratio) - log_prod, 700.0))
    elif ratio == 0.0:
        gap = 0.0
    else:
        gap = math.inf
    valid = bool(np.all(slack >= -tolerance) and q[0] <= 1.0 - tolerance)
    return SurvivalCertificate(
        n0=n0,
        horizon=horizon,
        tolerance=tolerance,
        b=tuple(b),
        q=tuple(q),
        slack=tuple(slack),
        valid=valid,
        truncation_gap=gap,
    )


def verify_certificate(schedule: Schedule, cert: SurvivalCertificate) -> tuple[bool, float]:
    """Recompute every slack from the stored q against exact pgfs.

    Returns (ok, worst slack); independent of how the certificate was built.
    """
    q = cert.q
    worst = math.inf
    for i in range(len(q) - 1):
        s = q[i] - float(schedule.law(cert.n0 + i).pgf(q[i + 1]))
        worst = min(worst, s)
    ok = worst >= -cert.tolerance and q[0] <= 1.0 - cert.tolerance
    return ok, worst
