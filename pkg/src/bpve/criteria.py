"""Analytic survival/extinction criteria as three-valued verdicts.

Every check returns a ``Verdict`` whose outcome is ``Extinct``, ``Survives``
or ``Inconclusive``, qualified by how the asymptotic leap was made:

* ``Certified`` -- a finite computation plus a declared tail assumption that
  was re-verified on the computed range (e.g. term ratios bounded below 1,
  or window means bounded away from 1 without an upward trend).
* ``AtHorizon`` -- the diagnostic quantity crossed its threshold, or the
  partial sums stabilized, at the computed horizon; no claim beyond it.

Checks tagged with scope ``bpve`` concern the plain population process;
scope ``bpws`` concerns the selection process (fitness labels increasing
along lineages).  Those are different processes: a supercritical population
whose selective counterpart dies out is consistent, so contradiction
detection runs per scope, plus the one sound cross rule (a certified-extinct
population forces the selective process extinct too).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import genfun, series
from .laws import Schedule

__all__ = [
    "EXTINCT",
    "SURVIVES",
    "INCONCLUSIVE",
    "CERTIFIED",
    "AT_HORIZON",
    "SCOPE_BPVE",
    "SCOPE_BPWS",
    "Verdict",
    "GeometricRatioTail",
    "MonotoneTail",
    "Main1Witness",
    "ContradictionError",
    "check_prodm_extinction",
    "check_main0",
    "check_cor_main0",
    "check_bpws_extinction",
    "check_main1",
    "check_cor_main1",
    "BatteryOptions",
    "run_battery",
]

EXTINCT = "Extinct"
SURVIVES = "Survives"
INCONCLUSIVE = "Inconclusive"
CERTIFIED = "Certified"
AT_HORIZON = "AtHorizon"
SCOPE_BPVE = "bpve"
SCOPE_BPWS = "bpws"

LOG_DIVERGENCE_THRESHOLD = -700.0
STABLE_REL_TOL = 1e-12
WINDOW_FRAC = 0.1
DEFAULT_C_GRID = (1.5, 2.0, 4.0)


class ContradictionError(RuntimeError):
    """Two certified verdicts excluded each other: an implementation bug."""


@dataclass(frozen=True)
class Verdict:
    criterion: str
    outcome: str
    qualifier: str | None
    scope: str
    horizon: int
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "outcome": self.outcome,
            "qualifier": self.qualifier,
            "scope": self.scope,
            "horizon": self.horizon,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class GeometricRatioTail:
    """Declares t_{j+1} <= ratio * t_j from index ``start`` on; re-verified
    on the computed range before being trusted."""

    start: int
    ratio: float


@dataclass(frozen=True)
class MonotoneTail:
    direction: str
    start: int = 0


@dataclass(frozen=True)
class Main1Witness:
    """Positive weight sequence (and optional scale) for the selection
    criteria; ``scale=None`` triggers the documented default search."""

    c: Callable[[int], float]
    scale: float | None = None

    @staticmethod
    def constant(value: float = 1.0, scale: float | None = None) -> "Main1Witness":
        return Main1Witness(c=lambda n: value, scale=scale)


def _tail(arr, k: int = 10) -> list[float]:
    a = np.asarray(arr, dtype=np.float64)
    return [float(x) for x in a[-k:]]


def _log_means(schedule: Schedule, horizon: int) -> tuple[np.ndarray, np.ndarray]:
    m, m2 = genfun.moment_arrays(schedule, 0, horizon)
    if np.any(m <= 0.0):
        raise ValueError("schedule means must be positive")
    return m, m2


# ---------------------------------------------------------------------------
# Population-process criteria


def check_prodm_extinction(
    schedule: Schedule,
    horizon: int = 400,
    *,
    log_threshold: float = LOG_DIVERGENCE_THRESHOLD,
    mean_sup_margin: float = 1e-6,
) -> Verdict:
    """Extinct when the running product of means provably collapses.

    Certified when window means stay below 1 by ``mean_sup_margin`` with no
    upward trend between the two half-windows (declared tail: means bounded
    below 1).  AtHorizon when the running log-product crosses
    ``log_threshold``.  Inconclusive otherwise.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    m, _ = _log_means(schedule, horizon)
    log_running = np.cumsum(np.log(m))
    rmin = float(np.min(log_running))
    argmin = int(np.argmin(log_running))
    q1 = max(1, horizon // 4)
    half = max(1, horizon // 2)
    sup_late = float(np.max(m[half:]))
    sup_mid = float(np.max(m[q1:half])) if half > q1 else sup_late
    payload = {
        "log_product_final": float(log_running[-1]),
        "log_product_min": rmin,
        "argmin": argmin,
        "window_mean_sup": sup_late,
        "log_threshold": log_threshold,
    }
    if sup_late <= 1.0 - mean_sup_margin and sup_late <= sup_mid + 1e-12:
        payload["tail_assumption"] = {
            "kind": "means_bounded_below_one",
            "bound": sup_late,
            "verified_from": half,
        }
        return Verdict("prop_main0ext", EXTINCT, CERTIFIED, SCOPE_BPVE, horizon, payload)
    if rmin <= log_threshold:
        return Verdict("prop_main0ext", EXTINCT, AT_HORIZON, SCOPE_BPVE, horizon, payload)
    return Verdict("prop_main0ext", INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)


def _beta_machinery(schedule: Schedule, anchor: int, horizon: int):
    beta = genfun.beta_sequence(schedule, anchor, horizon - anchor)
    m, m2 = genfun.moment_arrays(schedule, anchor, horizon)
    log_prod = np.cumsum(np.log(m))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_excess = m2 / m**2 - 1.0
        log_incr = np.where(
            ratio_excess > 0.0,
            np.log(np.maximum(ratio_excess, 1e-320)),
            -np.inf,
        )
        log_incr = np.where(np.isinf(m2), np.inf, log_incr)
    # increment l -> l+1 of beta uses the product up to l and moments at l+1
    log_incr = log_incr[1:] - log_prod[:-1]
    return beta, log_incr


def _beta_stabilized(beta: genfun.BetaSequence, rel_tol: float, window_frac: float) -> bool:
    lb = beta.log_beta
    end = lb[-1]
    if not np.isfinite(end):
        return False
    mid = lb[min(len(lb) - 1, max(0, int(len(lb) * (1.0 - window_frac)) - 1))]
    return (1.0 - float(np.exp(mid - end))) < rel_tol


def check_main0(
    schedule: Schedule,
    anchor: int = 0,
    horizon: int = 400,
    tail_model: GeometricRatioTail | None = None,
    *,
    stab_rel_tol: float = STABLE_REL_TOL,
    window_frac: float = WINDOW_FRAC,
    tolerance: float = genfun.DEFAULT_TOLERANCE,
) -> Verdict:
    """Survives when the beta sequence is provably bounded.

    Certified under a verified geometric-ratio tail on the beta increments;
    AtHorizon when beta stabilized at the horizon.  A survival certificate
    built from the truncated limits is attached to every Survives verdict.
    """
    if horizon <= anchor:
        raise ValueError("horizon must exceed anchor")
    beta, log_incr = _beta_machinery(schedule, anchor, horizon)
    payload: dict = {
        "anchor": anchor,
        "log_beta_tail": _tail(beta.log_beta),
        "beta_final": float(beta.beta[-1]) if np.isfinite(beta.log_beta[-1]) else math.inf,
    }
    qualifier = None
    if tail_model is not None:
        start = max(0, tail_model.start - anchor)
        if series.ratio_bound_verified(log_incr, start, tail_model.ratio):
            r = tail_model.ratio
            last = log_incr[-1]
            bound = beta.log_beta[-1]
            if np.isfinite(last):
                bound = float(np.logaddexp(bound, last + math.log(r / (1.0 - r))))
            payload["tail_assumption"] = {
                "kind": "geometric_ratio",
                "ratio": r,
                "verified_from": tail_model.start,
                "log_beta_limit_upper": float(bound),
            }
            qualifier = CERTIFIED
        else:
            payload["tail_assumption"] = {"kind": "geometric_ratio", "verified": False}
    if qualifier is None and _beta_stabilized(beta, stab_rel_tol, window_frac):
        qualifier = AT_HORIZON
    if qualifier is None:
        payload["diverging"] = bool(beta.log_beta[-1] > 700.0) or not np.isfinite(beta.log_beta[-1])
        return Verdict("thm_main0", INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)
    cert = genfun.build_survival_certificate(schedule, n0=anchor, horizon=horizon,
                                             tolerance=tolerance)
    payload["survival_certificate"] = cert.to_dict()
    return Verdict("thm_main0", SURVIVES, qualifier, SCOPE_BPVE, horizon, payload)


def _root_sequences(log_num: np.ndarray, log_prod: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # n-th roots in log form, skipping n = 0
    n = np.arange(1, len(log_prod))
    return log_num[1:] / n, log_prod[:-1] / n


def check_cor_main0(
    schedule: Schedule,
    variant: int,
    params: dict | None = None,
    horizon: int = 400,
    tail_model: GeometricRatioTail | None = None,
    *,
    stab_rel_tol: float = STABLE_REL_TOL,
    window_frac: float = WINDOW_FRAC,
) -> Verdict:
    """Easier-to-check sufficient conditions implying the beta criterion."""
    params = params or {}
    tag = f"cor_main0_{variant}"
    m, m2 = _log_means(schedule, horizon)
    payload: dict = {"variant": variant}

    if variant == 1:
        anchor = int(params.get("anchor", 0))
        log_prod = np.cumsum(np.log(m[anchor:]))
        with np.errstate(divide="ignore"):
            log_ratio = np.log(m2[anchor:]) - np.log(m[anchor:])
        trace = series.series_trace(log_ratio - log_prod)
        payload["partial_sum_tail"] = _tail(trace.log_partial_sums)
        if tail_model is not None and series.ratio_bound_verified(
                trace.log_terms, max(0, tail_model.start - anchor), tail_model.ratio):
            payload["tail_assumption"] = {"kind": "geometric_ratio", "ratio": tail_model.ratio}
            return Verdict(tag, SURVIVES, CERTIFIED, SCOPE_BPVE, horizon, payload)
        if trace.stabilized(stab_rel_tol, window_frac):
            return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPVE, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)

    log_prod_from0 = np.cumsum(np.log(m))

    if variant == 2:
        with np.errstate(divide="ignore"):
            log_num = np.log(m2) - 2.0 * np.log(m)
        roots_a, roots_b = _root_sequences(log_num, log_prod_from0)
        _, limsup_a = series.window_extrema(roots_a)
        liminf_b, _ = series.window_extrema(roots_b)
        payload.update({"limsup_root_ratio": limsup_a, "liminf_root_prod": liminf_b})
        if limsup_a < liminf_b - 1e-9:
            return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPVE, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)

    if variant == 3:
        g = params["g"]
        start = int(params.get("start", 0))
        gvals = np.array([float(g(n)) for n in range(horizon + 1)])
        if np.any(gvals < 1.0):
            raise ValueError("g must map into [1, inf)")
        dominated = bool(np.all(m2[start:] / m[start:] ** 2 <= gvals[start:] * (1.0 + 1e-12)))
        ratios = gvals[1:] / gvals[:-1]
        _, limsup_g = series.window_extrema(np.log(ratios))
        liminf_b, _ = series.window_extrema(log_prod_from0[:-1] / np.arange(1, horizon + 1))
        payload.update({
            "g_dominates": dominated,
            "limsup_log_g_ratio": limsup_g,
            "liminf_root_prod": liminf_b,
        })
        if dominated and limsup_g < liminf_b - 1e-9:
            return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPVE, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)

    if variant == 4:
        big_m = float(params.get("M", 1.0))
        small_k = float(params.get("k", 1.0))
        if big_m < 1.0 or small_k < 1.0:
            raise ValueError("variant 4 needs M, k >= 1")
        n_idx = np.arange(horizon + 1)
        with np.errstate(divide="ignore"):
            bounded = bool(np.all(
                np.log(m2) - 2.0 * np.log(m)
                <= math.log(small_k) + n_idx * math.log(big_m) + 1e-9))
        late_min, _ = series.window_extrema(m, frac=0.25)
        _, early_max = series.window_extrema(m[: max(2, horizon // 4)], frac=1.0)
        diverging = late_min > early_max and late_min >= 4.0
        payload.update({
            "ratio_bounded": bounded,
            "late_mean_min": late_min,
            "early_mean_max": early_max,
        })
        if bounded and diverging:
            return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPVE, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPVE, horizon, payload)

    raise ValueError("variant must be 1, 2, 3 or 4")


# ---------------------------------------------------------------------------
# Selection-process criteria


def check_bpws_extinction(
    schedule: Schedule,
    n0: int = 0,
    horizon: int = 400,
    *,
    log_threshold: float = LOG_DIVERGENCE_THRESHOLD,
) -> Verdict:
    """Extinct for the selection process when mean products lose to the
    factorial of path orderings.

    Certified when means verify m_n <= n + nbar, with nbar fitted on an
    early window and re-verified on a later one (declared tail: linear mean
    growth).  AtHorizon when the log ratio crosses ``log_threshold``.
    """
    if horizon < 8:
        raise ValueError("horizon must be >= 8")
    m, _ = _log_means(schedule, horizon)
    lp = np.concatenate([[0.0], np.cumsum(np.log(m))])  # lp[n] = sum_{i<n}
    n_idx = np.arange(horizon + 2, dtype=np.float64)
    from scipy.special import gammaln

    log_ratio = lp - gammaln(n_idx + n0 + 2.0)
    rmin = float(np.min(log_ratio))
    payload: dict = {"n0": n0, "log_ratio_min": rmin, "log_ratio_final": float(log_ratio[-1])}
    fit_lo, fit_hi = horizon // 2, 3 * horizon // 4
    slack = m[fit_lo:fit_hi] - np.arange(fit_lo, fit_hi)
    nbar = max(0, math.ceil(float(np.max(slack))))
    verify = np.arange(fit_hi, horizon + 1)
    if bool(np.all(m[fit_hi:] <= verify + nbar)):
        payload["tail_assumption"] = {
            "kind": "means_at_most_linear",
            "nbar": nbar,
            "fitted_on": [fit_lo, fit_hi],
            "verified_on": [fit_hi, horizon],
        }
        return Verdict("pro_extinction", EXTINCT, CERTIFIED, SCOPE_BPWS, horizon, payload)
    if rmin <= log_threshold:
        return Verdict("pro_extinction", EXTINCT, AT_HORIZON, SCOPE_BPWS, horizon, payload)
    return Verdict("pro_extinction", INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)


def _witness_logs(witness: Main1Witness, horizon: int) -> np.ndarray:
    c = np.array([float(witness.c(i)) for i in range(horizon + 1)])
    if np.any(c <= 0.0):
        raise ValueError("witness sequence must be positive")
    return np.log(c)


def _status_series(trace: series.SeriesTrace, tail_model, stab_rel_tol, window_frac,
                   auto_ratio_window: int | None = None):
    """certified / at_horizon / None for a nonnegative series."""
    if trace.log_total == -np.inf:
        return "certified", {"empty": True}
    if tail_model is not None and isinstance(tail_model, GeometricRatioTail):
        if series.ratio_bound_verified(trace.log_terms, tail_model.start, tail_model.ratio):
            return "certified", {"kind": "geometric_ratio", "ratio": tail_model.ratio}
    if auto_ratio_window is not None and len(trace.log_terms) > auto_ratio_window + 2:
        lt = trace.log_terms[auto_ratio_window:]
        finite = np.isfinite(lt)
        if np.all(finite):
            r_hat = float(np.exp(np.max(np.diff(lt))))
            if r_hat <= 1.0 - 1e-6:
                return "certified", {
                    "kind": "geometric_ratio",
                    "ratio": r_hat,
                    "verified_from": auto_ratio_window,
                }
    if trace.stabilized(stab_rel_tol, window_frac):
        return "at_horizon", None
    return None, None


def check_main1(
    schedule: Schedule,
    witness: Main1Witness,
    anchor: int = 0,
    horizon: int = 2000,
    tail_model: GeometricRatioTail | None = None,
    *,
    stab_rel_tol: float = STABLE_REL_TOL,
    window_frac: float = WINDOW_FRAC,
) -> Verdict:
    """Local survival of the selection process from a witness sequence.

    Requires (a) the weighted mean series sum c_i/m_i to converge, and (b)
    the second-moment series and the weighted products to behave, all in
    log-space.  ``tail_model`` applies to series (a); series (b) attempts an
    automatic geometric-ratio certification on its trailing half.
    """
    m, m2 = _log_means(schedule, horizon)
    logc = _witness_logs(witness, horizon)
    trace_a = series.series_trace(logc - np.log(m))
    status_a, tail_a = _status_series(trace_a, tail_model, stab_rel_tol, window_frac)

    with np.errstate(divide="ignore", invalid="ignore"):
        excess = m2 / m**2 - 1.0
        log_excess = np.where(excess > 0.0, np.log(np.maximum(excess, 1e-320)), -np.inf)
        log_excess = np.where(np.isinf(m2), np.inf, log_excess)

    grid = DEFAULT_C_GRID if witness.scale is None else (witness.scale,)
    chosen = None
    for scale in grid:
        log_scale = math.log(scale)
        j = np.arange(anchor, horizon + 1)
        cum_c = np.concatenate([[0.0], np.cumsum(logc[anchor:horizon])])
        log_terms_b = log_excess[anchor:] - (j * log_scale + cum_c)
        trace_b = series.series_trace(log_terms_b)
        status_b, tail_b = _status_series(trace_b, None, stab_rel_tol, window_frac,
                                          auto_ratio_window=len(log_terms_b) // 2)
        v = np.arange(horizon + 1) * log_scale + np.cumsum(logc)
        half = horizon // 2
        if series.monotone_verified(v, half, "increasing"):
            status_inf = "certified"
        elif float(np.min(v[half:])) >= float(np.min(v[: half + 1])) - 1e-12:
            status_inf = "at_horizon"
        else:
            status_inf = None
        if status_b and status_inf:
            chosen = (scale, trace_b, status_b, tail_b, status_inf, float(np.min(v)))
            break

    payload: dict = {
        "anchor": anchor,
        "weighted_mean_series": {
            "partial_sum_tail": _tail(trace_a.log_partial_sums),
            "total": trace_a.total,
            "status": status_a,
            "tail_assumption": tail_a,
        },
    }
    if status_a is None or chosen is None:
        return Verdict("thm_main1", INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)
    scale, trace_b, status_b, tail_b, status_inf, log_inf = chosen
    payload.update({
        "C": scale,
        "second_moment_series": {
            "partial_sum_tail": _tail(trace_b.log_partial_sums),
            "status": status_b,
            "tail_assumption": tail_b,
        },
        "weighted_product_inf": {"log_inf": log_inf, "status": status_inf},
        "mode": "local",
    })
    statuses = (status_a, status_b, status_inf)
    qualifier = CERTIFIED if all(s == "certified" for s in statuses) else AT_HORIZON
    return Verdict("thm_main1", SURVIVES, qualifier, SCOPE_BPWS, horizon, payload)


def check_cor_main1(
    schedule: Schedule,
    witness: Main1Witness,
    variant: int,
    params: dict | None = None,
    horizon: int = 2000,
    tail_model: GeometricRatioTail | None = None,
    *,
    stab_rel_tol: float = STABLE_REL_TOL,
    window_frac: float = WINDOW_FRAC,
) -> Verdict:
    """Corollary variants of the selection survival criterion, mirroring the
    population-process corollary with weight-sequence products."""
    params = params or {}
    tag = f"cor_main1_{variant}"
    m, m2 = _log_means(schedule, horizon)
    logc = _witness_logs(witness, horizon)
    trace_a = series.series_trace(logc - np.log(m))
    status_a, _ = _status_series(trace_a, tail_model, stab_rel_tol, window_frac)
    payload: dict = {
        "variant": variant,
        "weighted_mean_series_total": trace_a.total,
        "weighted_mean_series_status": status_a,
        "mode": "local",
    }
    if status_a is None:
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)

    grid = DEFAULT_C_GRID if witness.scale is None else (witness.scale,)
    anchor = int(params.get("anchor", 0))
    with np.errstate(divide="ignore"):
        log_ratio2 = np.log(m2) - 2.0 * np.log(m)

    if variant == 1:
        for scale in grid:
            j = np.arange(anchor, horizon + 1)
            cum_c = np.concatenate([[0.0], np.cumsum(logc[anchor:horizon])])
            trace = series.series_trace(log_ratio2[anchor:] - (j * math.log(scale) + cum_c))
            status, tail_used = _status_series(trace, None, stab_rel_tol, window_frac,
                                               auto_ratio_window=(horizon - anchor) // 2)
            if status:
                payload.update({"C": scale, "series_status": status,
                                "partial_sum_tail": _tail(trace.log_partial_sums)})
                qualifier = CERTIFIED if status == "certified" and status_a == "certified" \
                    else AT_HORIZON
                return Verdict(tag, SURVIVES, qualifier, SCOPE_BPWS, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)

    if variant == 2:
        roots_a = log_ratio2[1:] / np.arange(1, horizon + 1)
        _, limsup_a = series.window_extrema(roots_a)
        cum_c = np.cumsum(logc)
        for scale in grid:
            roots_b = cum_c[:-1] / np.arange(1, horizon + 1) + math.log(scale)
            liminf_b, _ = series.window_extrema(roots_b)
            if limsup_a < liminf_b - 1e-9:
                payload.update({"C": scale, "limsup_root_ratio": limsup_a,
                                "liminf_root_weighted": liminf_b})
                return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPWS, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)

    if variant == 3:
        g = params["g"]
        start = int(params.get("start", 0))
        gvals = np.array([float(g(n)) for n in range(horizon + 1)])
        dominated = bool(np.all(m2[start:] / m[start:] ** 2 <= gvals[start:] * (1.0 + 1e-12)))
        _, limsup_g = series.window_extrema(np.log(gvals[1:] / gvals[:-1]))
        cum_c = np.cumsum(logc)
        for scale in grid:
            liminf_b, _ = series.window_extrema(
                cum_c[:-1] / np.arange(1, horizon + 1) + math.log(scale))
            if dominated and limsup_g < liminf_b - 1e-9:
                payload.update({"C": scale, "g_dominates": dominated})
                return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPWS, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)

    if variant == 4:
        big_m = float(params.get("M", 1.0))
        small_k = float(params.get("k", 1.0))
        n_idx = np.arange(horizon + 1)
        bounded = bool(np.all(
            log_ratio2 <= math.log(small_k) + n_idx * math.log(big_m) + 1e-9))
        cvals = np.exp(logc)
        late_min, _ = series.window_extrema(cvals, frac=0.25)
        _, early_max = series.window_extrema(cvals[: max(2, horizon // 4)], frac=1.0)
        diverging = late_min > early_max and late_min >= 4.0
        payload.update({"ratio_bounded": bounded, "late_c_min": late_min})
        if bounded and diverging:
            return Verdict(tag, SURVIVES, AT_HORIZON, SCOPE_BPWS, horizon, payload)
        return Verdict(tag, INCONCLUSIVE, None, SCOPE_BPWS, horizon, payload)

    raise ValueError("variant must be 1, 2, 3 or 4")


# ---------------------------------------------------------------------------
# Battery


@dataclass(frozen=True)
class BatteryOptions:
    horizon: int = 400
    bpws_horizon: int | None = None
    witness: Main1Witness | None = None
    tail_model: GeometricRatioTail | None = None
    stab_rel_tol: float = STABLE_REL_TOL
    n0: int = 0


def run_battery(schedule: Schedule, options: BatteryOptions | None = None) -> list[Verdict]:
    """All applicable criteria in fixed order, with contradiction detection.

    Certified Extinct and Certified Survives within one scope, or a
    certified-extinct population together with a certified-surviving
    selection process, raise ``ContradictionError``.
    """
    opt = options or BatteryOptions()
    bpws_h = opt.bpws_horizon or opt.horizon
    verdicts = [
        check_prodm_extinction(schedule, opt.horizon),
        check_main0(schedule, anchor=opt.n0, horizon=opt.horizon,
                    tail_model=opt.tail_model, stab_rel_tol=opt.stab_rel_tol),
        check_cor_main0(schedule, 1, horizon=opt.horizon, tail_model=opt.tail_model,
                        stab_rel_tol=opt.stab_rel_tol),
        check_cor_main0(schedule, 2, horizon=opt.horizon),
        check_bpws_extinction(schedule, n0=opt.n0, horizon=bpws_h),
    ]
    if opt.witness is not None:
        verdicts.append(check_main1(schedule, opt.witness, anchor=opt.n0,
                                    horizon=bpws_h, tail_model=opt.tail_model,
                                    stab_rel_tol=opt.stab_rel_tol))
        verdicts.append(check_cor_main1(schedule, opt.witness, 1, horizon=bpws_h,
                                        stab_rel_tol=opt.stab_rel_tol))
    _assert_consistent(verdicts)
    return verdicts


def _assert_consistent(verdicts: list[Verdict]) -> None:
    certified = {(v.scope, v.outcome) for v in verdicts if v.qualifier == CERTIFIED}
    for scope in (SCOPE_BPVE, SCOPE_BPWS):
        if (scope, EXTINCT) in certified and (scope, SURVIVES) in certified:
            raise ContradictionError(f"certified Extinct and Survives both hold for {scope}")
    if (SCOPE_BPVE, EXTINCT) in certified and (SCOPE_BPWS, SURVIVES) in certified:
        raise ContradictionError(
            "population certified extinct but selection process certified surviving")
