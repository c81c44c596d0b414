"""Log-space partial-sum diagnostics shared by the analytic criteria.

Convergence of an infinite series is undecidable from finitely many terms;
these helpers separate the two honest things a finite machine can do:

* detect that partial sums have *stabilized* at the computed horizon
  (relative increment over the trailing window below a threshold), and
* *verify a declared tail bound* on the computed range, e.g. that successive
  terms shrink geometrically from some index on, which extends a finite sum
  to a certified bound on the full series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SeriesTrace",
    "series_trace",
    "ratio_bound_verified",
    "monotone_verified",
    "window_extrema",
]


@dataclass(frozen=True)
class SeriesTrace:
    """Nonnegative series given by the logs of its terms and partial sums."""

    log_terms: np.ndarray
    log_partial_sums: np.ndarray

    @property
    def total(self) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_partial_sums[-1]))

    @property
    def log_total(self) -> float:
        return float(self.log_partial_sums[-1])

    def stabilized(self, rel_tol: float, window_frac: float = 0.1) -> bool:
        """True when the trailing ``window_frac`` of indices added less than
        ``rel_tol`` of the final sum."""
        end = self.log_partial_sums[-1]
        if end == -np.inf:
            return True
        if not np.isfinite(end):
            return False
        mid_idx = min(len(self.log_partial_sums) - 1,
                      max(0, int(len(self.log_partial_sums) * (1.0 - window_frac)) - 1))
        mid = self.log_partial_sums[mid_idx]
        rel = 1.0 - float(np.exp(mid - end)) if np.isfinite(mid) else 1.0
        return rel < rel_tol

    def last_relative_increment(self) -> float:
        if len(self.log_partial_sums) < 2:
            return np.inf
        end, prev = self.log_partial_sums[-1], self.log_partial_sums[-2]
        if end == -np.inf:
            return 0.0
        if not np.isfinite(end):
            return np.inf
        return 1.0 - float(np.exp(prev - end)) if np.isfinite(prev) else 1.0


def series_trace(log_terms: np.ndarray) -> SeriesTrace:
    log_terms = np.asarray(log_terms, dtype=np.float64)
    if np.any(np.isnan(log_terms)):
        raise OverflowError("series terms exceeded log-space range")
    return SeriesTrace(log_terms=log_terms, log_partial_sums=np.logaddexp.accumulate(log_terms))


def ratio_bound_verified(log_terms: np.ndarray, start: int, ratio: float,
                         slack: float = 1e-9) -> bool:
    """Check t_{j+1} <= ratio * t_j for every j >= start on the computed
    range.  Zero terms may only be followed by zero terms."""
    if not (0.0 < ratio < 1.0):
        return False
    lt = np.asarray(log_terms, dtype=np.float64)[start:]
    if lt.size < 2 or np.any(lt == np.inf):
        return False
    prev, nxt = lt[:-1], lt[1:]
    with np.errstate(invalid="ignore"):
        bad = nxt > prev + (np.log(ratio) + slack)
    return not bool(np.any(bad))


def monotone_verified(values: np.ndarray, start: int, direction: str,
                      slack: float = 1e-12) -> bool:
    v = np.asarray(values, dtype=np.float64)[start:]
    if v.size < 2:
        return False
    d = np.diff(v)
    if direction == "increasing":
        return bool(np.all(d >= -slack))
    if direction == "decreasing":
        return bool(np.all(d <= slack))
    raise ValueError(f"unknown direction {direction!r}")


def window_extrema(values: np.ndarray, frac: float = 0.5) -> tuple[float, float]:
    """(min, max) over the trailing ``frac`` of the index range, discarding
    the transient prefix."""
    v = np.asarray(values, dtype=np.float64)
    lo = min(len(v) - 1, int(len(v) * (1.0 - frac)))
    w = v[lo:]
    return float(np.min(w)), float(np.max(w))
