"""Offspring laws and per-generation schedules.

Each law knows its probability generating function in closed form, its exact
first two moments, its point masses, and how to sample by quantile inversion
from uniforms in (0, 1).  Inversion is used everywhere (single draws and
whole-generation totals) so that streams stay reproducible: the uniforms come
from a frozen counter-based generator and the transform is the mathematical
quantile function, not a library-version-dependent rejection algorithm.

Laws are immutable and validated at construction:

* ``pmf(0) < 1`` -- a particle always has a nonzero chance of offspring,
* ``mean > 0``,
* explicit laws carry finite support and masses summing to 1 within 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = [
    "OffspringLaw",
    "Geometric",
    "Poisson",
    "Binomial",
    "Bernoulli",
    "TwoPoint",
    "Explicit",
    "Schedule",
    "ConstantSchedule",
    "TableSchedule",
    "FormulaSchedule",
    "ConstantRule",
    "PowerRule",
    "DoublingRule",
    "CallableRule",
]

_PMF_SUM_TOL = 1e-12


def _float_or_inf(k: int) -> float:
    """float(k) for arbitrary python ints, saturating to inf."""
    try:
        return float(k)
    except OverflowError:
        return math.inf


class OffspringLaw:
    """Interface shared by all offspring laws.

    Subclasses provide ``mean``, ``second_moment``, ``pgf``, ``pmf``, ``ppf``
    and the generation-total hooks ``sum_uniform_count`` / ``sum_ppf`` used
    by the simulation engines.
    """

    def pgf(self, z):
        raise NotImplementedError

    def pmf(self, i: int) -> float:
        raise NotImplementedError

    def ppf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw by inversion from an explicit numpy Generator."""
        if size is None:
            return int(self.ppf(rng.random(1))[0])
        return self.ppf(rng.random(size))

    def sum_uniform_count(self) -> int:
        """Uniforms needed to draw the total offspring of one generation."""
        return 1

    def sum_ppf(self, u: np.ndarray, parents: np.ndarray) -> np.ndarray:
        """Total offspring of ``parents[i]`` particles from uniforms ``u``.

        ``u`` has shape (len(parents), sum_uniform_count()).  Returns float64
        totals, exact up to 2**53 (population caps sit far below).
        """
        raise NotImplementedError

    def _check_z(self, z):
        z = np.asarray(z, dtype=np.float64)
        if np.any(z < 0.0) or np.any(z > 1.0):
            raise ValueError("pgf argument must lie in [0, 1]")
        return z


@dataclass(frozen=True)
class Geometric(OffspringLaw):
    """Geometric law on {0, 1, ...}: pmf(i) = m^i / (1+m)^(i+1)."""

    mean: float

    def __post_init__(self):
        if not (self.mean > 0.0 and math.isfinite(self.mean)):
            raise ValueError(f"geometric mean must be positive and finite, got {self.mean}")

    @property
    def second_moment(self) -> float:
        return 2.0 * self.mean * self.mean + self.mean

    def pgf(self, z):
        z = self._check_z(z)
        return 1.0 / (1.0 + self.mean * (1.0 - z))

    def pmf(self, i: int) -> float:
        if i < 0:
            return 0.0
        return math.exp(i * math.log(self.mean) - (i + 1) * math.log1p(self.mean))

    def ppf(self, u: np.ndarray) -> np.ndarray:
        # smallest j with 1 - (1-s)^(j+1) >= u, s = 1/(1+m)
        log_fail = math.log1p(-1.0 / (1.0 + self.mean))
        j = np.ceil(np.log1p(-np.asarray(u)) / log_fail) - 1.0
        return np.maximum(j, 0.0).astype(np.int64)

    def sum_ppf(self, u, parents):
        s = 1.0 / (1.0 + self.mean)
        return stats.nbinom.ppf(u[:, 0], parents, s)


@dataclass(frozen=True)
class Poisson(OffspringLaw):
    mean: float

    def __post_init__(self):
        if not (self.mean > 0.0 and math.isfinite(self.mean)):
            raise ValueError(f"poisson mean must be positive and finite, got {self.mean}")

    @property
    def second_moment(self) -> float:
        return self.mean * self.mean + self.mean

    def pgf(self, z):
        z = self._check_z(z)
        return np.exp(self.mean * (z - 1.0))

    def pmf(self, i: int) -> float:
        if i < 0:
            return 0.0
        m = self.mean
        return math.exp(i * math.log(m) - m - math.lgamma(i + 1))

    def ppf(self, u: np.ndarray) -> np.ndarray:
        return stats.poisson.ppf(u, self.mean).astype(np.int64)

    def sum_ppf(self, u, parents):
        return stats.poisson.ppf(u[:, 0], parents * self.mean)


@dataclass(frozen=True)
class Binomial(OffspringLaw):
    trials: int
    success_prob: float

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("binomial trials must be >= 1")
        if not (0.0 < self.success_prob <= 1.0):
            raise ValueError("binomial success_prob must be in (0, 1]")

    @property
    def mean(self) -> float:
        return self.trials * self.success_prob

    @property
    def second_moment(self) -> float:
        t, p = self.trials, self.success_prob
        return t * (t - 1) * p * p + t * p

    def pgf(self, z):
        z = self._check_z(z)
        return (1.0 - self.success_prob + self.success_prob * z) ** self.trials

    def pmf(self, i: int) -> float:
        t, p = self.trials, self.success_prob
        if i < 0 or i > t:
            return 0.0
        if p == 1.0:
            return 1.0 if i == t else 0.0
        log_mass = (
            math.lgamma(t + 1) - math.lgamma(i + 1) - math.lgamma(t - i + 1)
            + i * math.log(p) + (t - i) * math.log1p(-p)
        )
        return math.exp(log_mass)

    def ppf(self, u: np.ndarray) -> np.ndarray:
        return stats.binom.ppf(u, self.trials, self.success_prob).astype(np.int64)

    def sum_ppf(self, u, parents):
        return stats.binom.ppf(u[:, 0], parents * self.trials, self.success_prob)


@dataclass(frozen=True)
class Bernoulli(OffspringLaw):
    success_prob: float

    def __post_init__(self):
        if not (0.0 < self.success_prob < 1.0):
            raise ValueError("bernoulli success_prob must be in (0, 1)")

    @property
    def mean(self) -> float:
        return self.success_prob

    @property
    def second_moment(self) -> float:
        return self.success_prob

    def pgf(self, z):
        z = self._check_z(z)
        return 1.0 - self.success_prob + self.success_prob * z

    def pmf(self, i: int) -> float:
        if i == 0:
            return 1.0 - self.success_prob
        if i == 1:
            return self.success_prob
        return 0.0

    def ppf(self, u: np.ndarray) -> np.ndarray:
        return (np.asarray(u) > 1.0 - self.success_prob).astype(np.int64)

    def sum_ppf(self, u, parents):
        # single-parent generations dominate survival runs of sub-unit laws;
        # the direct threshold avoids a scipy ppf round trip
        if np.all(parents == 1.0):
            return (u[:, 0] > 1.0 - self.success_prob).astype(np.float64)
        return stats.binom.ppf(u[:, 0], parents, self.success_prob)


@dataclass(frozen=True)
class TwoPoint(OffspringLaw):
    """Mass ``prob`` at the atom ``k`` and ``1 - prob`` at zero.

    ``k`` may be an arbitrarily large python int; constructibility only
    requires ``prob`` to stay a positive float.  ``ppf`` supports atoms up to
    2**62 (the engines intercept larger atoms before totals materialize).
    """

    k: int
    prob: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("twopoint atom must be a positive integer")
        if not (0.0 < self.prob <= 1.0):
            raise ValueError("twopoint prob must be in (0, 1]")

    @property
    def mean(self) -> float:
        return self.prob * _float_or_inf(self.k)

    @property
    def second_moment(self) -> float:
        return self.mean * _float_or_inf(self.k)

    def pgf(self, z):
        z = self._check_z(z)
        kf = _float_or_inf(self.k)
        with np.errstate(divide="ignore"):
            logz = np.where(z > 0.0, np.log(np.maximum(z, 1e-320)), -np.inf)
        zk = np.where(z >= 1.0, 1.0, np.exp(kf * logz))
        return 1.0 - self.prob + self.prob * zk

    def pmf(self, i: int) -> float:
        if i == 0:
            return 1.0 - self.prob
        if i == self.k:
            return self.prob
        return 0.0

    def ppf(self, u: np.ndarray) -> np.ndarray:
        if self.k > 2**62:
            raise ValueError("twopoint atom too large for direct sampling")
        return np.where(np.asarray(u) > 1.0 - self.prob, self.k, 0).astype(np.int64)

    def sum_ppf(self, u, parents):
        hits = stats.binom.ppf(u[:, 0], parents, self.prob)
        return hits * _float_or_inf(self.k)


@dataclass(frozen=True)
class Explicit(OffspringLaw):
    """Finite-support law given as ((value, mass), ...)."""

    masses: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.masses:
            raise ValueError("explicit law needs at least one atom")
        seen = set()
        for i, p in self.masses:
            if i < 0 or i != int(i):
                raise ValueError(f"support values must be nonnegative integers, got {i}")
            if p < 0.0:
                raise ValueError(f"negative mass {p} at {i}")
            if i in seen:
                raise ValueError(f"duplicate support value {i}")
            seen.add(i)
        total = math.fsum(p for _, p in self.masses)
        if abs(total - 1.0) > _PMF_SUM_TOL:
            raise ValueError(f"masses sum to {total}, expected 1 within {_PMF_SUM_TOL}")
        ordered = tuple(sorted((int(i), float(p)) for i, p in self.masses))
        object.__setattr__(self, "masses", ordered)
        if self.pmf(0) >= 1.0:
            raise ValueError("explicit law must keep pmf(0) < 1")
        if self.mean <= 0.0:
            raise ValueError("explicit law must have positive mean")

    @property
    def mean(self) -> float:
        return math.fsum(i * p for i, p in self.masses)

    @property
    def second_moment(self) -> float:
        return math.fsum(i * i * p for i, p in self.masses)

    def pgf(self, z):
        z = self._check_z(z)
        out = np.zeros_like(z, dtype=np.float64)
        for i, p in self.masses:
            out = out + p * z**i
        return out

    def pmf(self, i: int) -> float:
        for j, p in self.masses:
            if j == i:
                return p
        return 0.0

    def _tables(self):
        support = np.array([i for i, _ in self.masses], dtype=np.int64)
        probs = np.array([p for _, p in self.masses], dtype=np.float64)
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        return support, probs, cum

    def ppf(self, u: np.ndarray) -> np.ndarray:
        support, _, cum = self._tables()
        idx = np.searchsorted(cum, np.asarray(u), side="left")
        return support[np.minimum(idx, len(support) - 1)]

    def sum_uniform_count(self) -> int:
        return max(1, len(self.masses) - 1)

    def sum_ppf(self, u, parents):
        # Multinomial totals via the chain of conditional binomials; one
        # uniform per atom except the last.
        support, probs, _ = self._tables()
        remaining = np.asarray(parents, dtype=np.float64)
        mass_left = 1.0
        total = np.zeros_like(remaining)
        for j in range(len(support) - 1):
            share = min(max(probs[j] / mass_left, 0.0), 1.0)
            taken = stats.binom.ppf(u[:, j], remaining, share)
            total += support[j] * taken
            remaining = remaining - taken
            mass_left -= probs[j]
        total += support[-1] * remaining
        return total


# ---------------------------------------------------------------------------
# Parameter rules and schedules


@dataclass(frozen=True)
class ConstantRule:
    value: float

    def __call__(self, n: int):
        return self.value


@dataclass(frozen=True)
class PowerRule:
    """scale * (n + shift) ** exponent."""

    scale: float
    exponent: float
    shift: float

    def __call__(self, n: int) -> float:
        return self.scale * (n + self.shift) ** self.exponent


@dataclass(frozen=True)
class DoublingRule:
    """base ** (2 ** (n-1)) for n >= 1, and base at n = 0, as exact ints."""

    base: int

    def __call__(self, n: int) -> int:
        if n == 0:
            return self.base
        return self.base ** (2 ** (n - 1))

    def float_value(self, n: int) -> float:
        # saturating float without materializing the exact int, whose digit
        # count itself grows doubly exponentially
        log2v = math.log2(self.base) * (1 if n == 0 else 2 ** (n - 1))
        if log2v > 1023.0:
            return math.inf
        return float(self(n))


@dataclass(frozen=True)
class CallableRule:
    fn: object

    def __call__(self, n: int):
        return self.fn(n)


def _as_rule(value) -> object:
    if callable(value):
        return value
    return ConstantRule(float(value))


def _rule_float(rule, n: int) -> float:
    """Saturating float of a rule value (handles doubly-exponential rules)."""
    if hasattr(rule, "float_value"):
        return rule.float_value(n)
    v = rule(n)
    return _float_or_inf(v) if isinstance(v, int) else float(v)


class Schedule:
    """Sequence of offspring laws, one per generation, valid for every n >= 0.

    ``mean`` and ``second_moment`` are total functions even where the law
    itself cannot be represented in floats (the second moment then saturates
    to inf), so the analytic criteria can always be evaluated; ``law(n)``
    may raise only for such degenerate extremes, which the simulators never
    reach because extinction or the population cap ends the run first.
    """

    def law(self, n: int) -> OffspringLaw:
        raise NotImplementedError

    def mean(self, n: int) -> float:
        return self.law(n).mean

    def second_moment(self, n: int) -> float:
        return self.law(n).second_moment

    @staticmethod
    def constant(law: OffspringLaw) -> "ConstantSchedule":
        return ConstantSchedule(law)


class ConstantSchedule(Schedule):
    def __init__(self, law: OffspringLaw):
        self._law = law

    def law(self, n: int) -> OffspringLaw:
        return self._law

    def __repr__(self):
        return f"ConstantSchedule({self._law!r})"


class TableSchedule(Schedule):
    """Explicit prefix of laws followed by a tail schedule (no silent repeat)."""

    def __init__(self, prefix, tail: Schedule):
        self._prefix = tuple(prefix)
        if not isinstance(tail, Schedule):
            raise ValueError("table schedule requires an explicit tail schedule")
        self._tail = tail

    def law(self, n: int) -> OffspringLaw:
        if n < len(self._prefix):
            return self._prefix[n]
        return self._tail.law(n - len(self._prefix))


class FormulaSchedule(Schedule):
    """Family tag plus total parameter rules n -> parameter value."""

    _FAMILIES = ("geometric", "poisson", "binomial", "bernoulli", "twopoint")

    def __init__(self, family: str, **params):
        if family not in self._FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        self.family = family
        self._rules = {name: _as_rule(rule) for name, rule in params.items()}
        self._cache: dict[int, OffspringLaw] = {}
        required = {
            "geometric": {"mean"},
            "poisson": {"mean"},
            "binomial": {"trials", "success_prob"},
            "bernoulli": {"a"},
        }
        if family in required and set(self._rules) != required[family]:
            raise ValueError(f"{family} schedule needs parameters {sorted(required[family])}")
        if family == "twopoint":
            if "k" not in self._rules or len({"mean", "prob"} & set(self._rules)) != 1:
                raise ValueError("twopoint schedule needs 'k' plus exactly one of 'mean'/'prob'")

    def _param(self, name: str, n: int):
        return self._rules[name](n)

    def law(self, n: int) -> OffspringLaw:
        cached = self._cache.get(n)
        if cached is not None:
            return cached
        f = self.family
        if f == "geometric":
            law = Geometric(mean=float(self._param("mean", n)))
        elif f == "poisson":
            law = Poisson(mean=float(self._param("mean", n)))
        elif f == "binomial":
            law = Binomial(trials=int(self._param("trials", n)),
                           success_prob=float(self._param("success_prob", n)))
        elif f == "bernoulli":
            law = Bernoulli(success_prob=1.0 - float(self._param("a", n)))
        else:
            kf = _rule_float(self._rules["k"], n)
            if not math.isfinite(kf):
                raise ValueError(f"twopoint atom at generation {n} exceeds float range")
            k = int(self._param("k", n))
            if "prob" in self._rules:
                prob = float(self._param("prob", n))
            else:
                prob = float(self._param("mean", n)) / kf
            law = TwoPoint(k=k, prob=prob)
        if len(self._cache) < 100_000:
            self._cache[n] = law
        return law

    def mean(self, n: int) -> float:
        f = self.family
        if f in ("geometric", "poisson"):
            return float(self._param("mean", n))
        if f == "binomial":
            return int(self._param("trials", n)) * float(self._param("success_prob", n))
        if f == "bernoulli":
            return 1.0 - float(self._param("a", n))
        if "mean" in self._rules:
            return float(self._param("mean", n))
        return float(self._param("prob", n)) * _rule_float(self._rules["k"], n)

    def second_moment(self, n: int) -> float:
        f = self.family
        m = self.mean(n)
        if f == "geometric":
            return 2.0 * m * m + m
        if f == "poisson":
            return m * m + m
        if f == "binomial":
            t = int(self._param("trials", n))
            p = float(self._param("success_prob", n))
            return t * (t - 1) * p * p + t * p
        if f == "bernoulli":
            return m
        return m * _rule_float(self._rules["k"], n)
