"""Catalogue of pre-configured worked examples.

Each entry bundles a schedule, the analyses and simulations that probe it,
and the expected qualitative outcome, and reports one pass/fail check per
claim.  Entries are keyed by the identifiers the ``reproduce`` command
accepts; titles say what each case demonstrates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import criteria, genfun, sim
from .laws import (
    CallableRule,
    ConstantRule,
    DoublingRule,
    FormulaSchedule,
    PowerRule,
)

__all__ = ["CATALOGUE", "run_example", "example_ids"]


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    observed: str
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected,
                "observed": self.observed, "passed": self.passed}


@dataclass(frozen=True)
class Entry:
    title: str
    default_seed: int
    run: Callable[[int], list[Check]]


def _check(name: str, expected: str, observed, passed: bool) -> Check:
    return Check(name=name, expected=expected, observed=str(observed), passed=bool(passed))


def _geometric_power(alpha: float) -> FormulaSchedule:
    return FormulaSchedule("geometric", mean=PowerRule(1.0, alpha, 1.0))


def _run_quadratic_means(seed: int) -> list[Check]:
    sched = _geometric_power(2.0)
    verdict = criteria.check_main0(sched, horizon=200)
    cert = verdict.certificate.get("survival_certificate", {})
    ok_cert, worst = (False, math.nan)
    if cert:
        ok_cert, worst = genfun.verify_certificate(
            sched, genfun.certificate_from_dict(cert))
    curve = genfun.extinction_curve(sched, 400)
    est = sim.estimate_survival(sched, sim.SimConfig(
        horizon=200, replicas=4000, seed=seed))
    mc = est.p_hat_upper
    analytic = 1.0 - curve[0]
    return [
        _check("survival criterion fires", "Survives",
               verdict.outcome, verdict.outcome == criteria.SURVIVES),
        _check("certificate verifies", "valid, slack >= -1e-10",
               f"valid={ok_cert}, worst={worst:.2e}", ok_cert and worst >= -1e-10),
        _check("Monte Carlo matches curve",
               f"within 0.025 of {analytic:.4f}",
               f"{mc:.4f}", abs(mc - analytic) <= 0.025),
    ]


def _run_subunit_means(seed: int) -> list[Check]:
    sched = FormulaSchedule("bernoulli", a=PowerRule(1.0, -2.0, 2.0))
    oracle = 1.0 - 0.5 * 1002.0 / 1001.0
    curve = genfun.extinction_curve(sched, 1000)
    est = sim.estimate_survival(sched, sim.SimConfig(
        horizon=1000, replicas=20_000, seed=seed))
    return [
        _check("extinction-by-1000 matches product formula",
               f"within 1e-4 of {oracle:.6f}",
               f"{curve[0]:.6f}", abs(curve[0] - oracle) <= 1e-4),
        _check("Monte Carlo survival ~ 0.5005",
               "within 0.015 of 0.5005",
               f"{est.p_hat:.4f}", abs(est.p_hat - 0.50050) <= 0.015),
        _check("every generation mean below one yet survival positive",
               "p_hat > 0.4", f"{est.p_hat:.4f}", est.p_hat > 0.4),
    ]


def doubling_atom_term(n: int, mean: float = 2.0, base: int = 4) -> float:
    """(1 - mean/k_n) ** k_n with k_n = base ** (2 ** (n-1)), in log-space
    once k_n leaves float range."""
    log_k = math.log(base) * (1 if n == 0 else 2 ** (n - 1))
    if log_k < 30.0:
        k = base ** (2 ** (n - 1)) if n >= 1 else base
        return (1.0 - mean / k) ** k
    # k * log1p(-mean/k) = -mean - mean^2/(2k) - ..., correction below 1e-12
    return math.exp(-mean - mean * mean / 2.0 * math.exp(-log_k))


def _run_doubling_atoms(seed: int) -> list[Check]:
    sched = FormulaSchedule("twopoint", mean=ConstantRule(2.0), k=DoublingRule(4))
    term = doubling_atom_term(10)
    verdicts = criteria.run_battery(sched, criteria.BatteryOptions(horizon=50))
    survives = [v for v in verdicts if v.outcome == criteria.SURVIVES]
    # atoms beyond generation 12 are not float-representable; every replica
    # is long extinct by then, so the simulation horizon is capped there
    est = sim.estimate_survival(sched, sim.SimConfig(
        horizon=12, replicas=10_000, seed=seed))
    extinct_fraction = est.extinct / est.replicas
    return [
        _check("failure-mass term approaches exp(-2)",
               f"within 1e-3 of {math.exp(-2.0):.5f}",
               f"{term:.5f}", abs(term - math.exp(-2.0)) <= 1e-3),
        _check("no survival criterion fires despite growing means",
               "0 Survives verdicts", f"{len(survives)}", not survives),
        _check("all replicas extinct by capped horizon 12",
               "extinct fraction 1.0", f"{extinct_fraction:.4f}",
               extinct_fraction == 1.0),
    ]


def phase_transition_schedule(alpha: float) -> FormulaSchedule:
    return _geometric_power(alpha)


def _run_phase_sweep(seed: int) -> list[Check]:
    checks = []
    for alpha in (0.5, 0.9):
        v = criteria.check_bpws_extinction(phase_transition_schedule(alpha), horizon=2000)
        checks.append(_check(f"alpha={alpha}: selection extinction",
                             "Extinct", v.outcome, v.outcome == criteria.EXTINCT))
    for alpha in (1.5, 2.0):
        v = criteria.check_main1(
            phase_transition_schedule(alpha), criteria.Main1Witness.constant(1.0),
            horizon=100_000, stab_rel_tol=1e-3)
        checks.append(_check(f"alpha={alpha}: local survival",
                             "Survives", v.outcome, v.outcome == criteria.SURVIVES))
    for alpha, surviving in ((0.9, False), (1.5, True)):
        est = sim.estimate_bpws_survival(
            phase_transition_schedule(alpha), 0.0,
            sim.SimConfig(horizon=100, replicas=400, seed=seed,
                          population_cap=100_000))
        frac = est.p_hat_upper
        ok = frac > 0.0 if surviving else frac == 0.0
        checks.append(_check(
            f"alpha={alpha}: selection Monte Carlo",
            "fraction > 0" if surviving else "fraction = 0",
            f"{frac:.4f}", ok))
    return checks


def _ci_mean(n: int) -> float:
    k = n.bit_length() - 1
    if n >= 1 and n == (1 << k):
        return float(k + 1)
    return float((n + 1) ** 2)


def _ci_weight(n: int) -> float:
    k = n.bit_length() - 1
    if n >= 1 and n == (1 << k):
        return 1.0 / (k + 1)
    return 2.0


def sparse_slow_means_schedule() -> FormulaSchedule:
    """Quadratic means except m = k+1 at n = 2^k, where the plain inverse-mean
    series diverges but a weighted one converges."""
    return FormulaSchedule("geometric", mean=CallableRule(_ci_mean))


def sparse_slow_means_witness() -> criteria.Main1Witness:
    return criteria.Main1Witness(c=_ci_weight, scale=1.0)


def _run_sparse_slow_means(seed: int) -> list[Check]:
    sched = sparse_slow_means_schedule()
    horizon = 100_000
    half = horizon // 2
    plain = [0.0]
    weighted = [0.0]
    for n in range(horizon):
        plain.append(plain[-1] + 1.0 / _ci_mean(n))
        weighted.append(weighted[-1] + _ci_weight(n) / _ci_mean(n))
    plain_growth = plain[-1] - plain[half]
    weighted_growth = weighted[-1] - weighted[half]
    v = criteria.check_main1(sched, sparse_slow_means_witness(),
                             horizon=horizon, stab_rel_tol=1e-3)
    return [
        _check("plain inverse-mean series keeps growing",
               "adds > 0.02 over the last doubling", f"{plain_growth:.5f}",
               plain_growth > 0.02),
        _check("weighted series has stabilized",
               "adds < 1e-3 over the last doubling", f"{weighted_growth:.2e}",
               weighted_growth < 1e-3),
        _check("weighted criterion proves local survival",
               "Survives", v.outcome, v.outcome == criteria.SURVIVES),
    ]


CATALOGUE: dict[str, Entry] = {
    "exm:continuous": Entry(
        title="quadratic geometric means: certified survival with Monte Carlo check",
        default_seed=2024_01,
        run=_run_quadratic_means,
    ),
    "exmp:less1surv": Entry(
        title="sub-unit means with summable failure mass still survive",
        default_seed=2024_02,
        run=_run_subunit_means,
    ),
    "exmp:largem_nextinction": Entry(
        title="doubling atoms: means grow yet the process dies",
        default_seed=2024_03,
        run=_run_doubling_atoms,
    ),
    "rem:nalpha-sweep": Entry(
        title="selection phase transition across mean growth exponents",
        default_seed=2024_04,
        run=_run_phase_sweep,
    ),
    "exmp:ci": Entry(
        title="weight sequence rescues criteria when inverse means diverge",
        default_seed=2024_05,
        run=_run_sparse_slow_means,
    ),
}


def example_ids() -> list[str]:
    return sorted(CATALOGUE)


def run_example(example_id: str, seed: int | None = None) -> dict:
    if example_id not in CATALOGUE:
        raise KeyError(f"unknown example id {example_id!r}; known: {example_ids()}")
    entry = CATALOGUE[example_id]
    checks = entry.run(entry.default_seed if seed is None else seed)
    return {
        "example_id": example_id,
        "title": entry.title,
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }
