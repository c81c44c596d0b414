"""Typed documents: schedule descriptions, analysis configs, service API.

These pydantic models are the single source of truth for every JSON surface
of the package.  All documents reject unknown fields, so a misspelled key
fails validation instead of silently falling back to a default.  The
machine-readable JSON Schema for the schedule format is shipped at
``bpve/schemas/schedule.schema.json`` and regenerated from these models
(test-enforced).

Schedule examples::

    {"family": "geometric", "mean": {"kind": "power", "scale": 1.0,
                                     "exponent": 2.0, "shift": 1.0}}
    {"family": "bernoulli", "a": {"kind": "power", "scale": 1.0,
                                  "exponent": -2.0, "shift": 2.0}}
    {"family": "twopoint", "mean": 2.0, "k": {"kind": "doubling", "base": 4}}
"""

from __future__ import annotations

import hashlib
import json
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from . import criteria, laws

__all__ = [
    "ScheduleDoc",
    "AnalysisConfigDoc",
    "WitnessDoc",
    "TailModelDoc",
    "to_schedule",
    "to_witness",
    "to_tail_model",
    "parse_schedule_document",
    "schedule_hash",
    "schedule_json_schema",
    "AnalyzeRequest",
    "CurveRequest",
    "CertificateRequest",
    "SimulateRequest",
    "SelectRequest",
    "PercolateRequest",
    "ReproduceRequest",
    "Meta",
    "AnalyzeResponse",
    "CurveResponse",
    "CertificateResponse",
    "SimulateResponse",
    "SelectResponse",
    "PercolateResponse",
    "ReproduceResponse",
]


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid")


# -- parameter rules ---------------------------------------------------------


class ConstantParam(_Doc):
    kind: Literal["constant"]
    value: float


class PowerParam(_Doc):
    """scale * (n + shift) ** exponent."""

    kind: Literal["power"]
    scale: float = 1.0
    exponent: float
    shift: float = 0.0


class DoublingParam(_Doc):
    """base ** (2 ** (n-1)) for n >= 1 and base at n = 0."""

    kind: Literal["doubling"]
    base: int = Field(ge=2)


ParamDoc = Annotated[Union[ConstantParam, PowerParam, DoublingParam],
                     Field(discriminator="kind")]
Param = Union[float, ParamDoc]
IntParam = Union[int, ParamDoc]


def _rule(p):
    if isinstance(p, (int, float)):
        return laws.ConstantRule(float(p))
    if isinstance(p, ConstantParam):
        return laws.ConstantRule(p.value)
    if isinstance(p, PowerParam):
        return laws.PowerRule(scale=p.scale, exponent=p.exponent, shift=p.shift)
    if isinstance(p, DoublingParam):
        return laws.DoublingRule(base=p.base)
    raise TypeError(f"unsupported parameter {p!r}")


def _int_rule(p):
    if isinstance(p, int):
        return lambda n: p
    return _rule(p)


# -- schedule documents ------------------------------------------------------


class GeometricScheduleDoc(_Doc):
    family: Literal["geometric"]
    mean: Param


class PoissonScheduleDoc(_Doc):
    family: Literal["poisson"]
    mean: Param


class BinomialScheduleDoc(_Doc):
    family: Literal["binomial"]
    trials: IntParam
    success_prob: Param


class BernoulliScheduleDoc(_Doc):
    """Success probability 1 - a_n; ``a`` is the per-generation failure mass."""

    family: Literal["bernoulli"]
    a: Param


class TwoPointScheduleDoc(_Doc):
    """Atom k_n with mass prob_n; parameterized by ``prob`` or by ``mean``
    (then prob_n = mean_n / k_n)."""

    family: Literal["twopoint"]
    k: IntParam
    mean: float | None = None
    prob: float | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.mean is None) == (self.prob is None):
            raise ValueError("twopoint needs exactly one of 'mean' or 'prob'")
        return self


class ExplicitScheduleDoc(_Doc):
    family: Literal["explicit"]
    pmf: list[tuple[int, float]]


class TableScheduleDoc(_Doc):
    """Explicit prefix of laws, then a mandatory tail schedule."""

    family: Literal["table"]
    prefix: list["ScheduleDoc"]
    tail: "ScheduleDoc"


ScheduleDoc = Annotated[
    Union[
        GeometricScheduleDoc,
        PoissonScheduleDoc,
        BinomialScheduleDoc,
        BernoulliScheduleDoc,
        TwoPointScheduleDoc,
        ExplicitScheduleDoc,
        TableScheduleDoc,
    ],
    Field(discriminator="family"),
]

TableScheduleDoc.model_rebuild()

_SCHEDULE_ADAPTER: TypeAdapter = TypeAdapter(ScheduleDoc)


def to_schedule(doc) -> laws.Schedule:
    if isinstance(doc, ExplicitScheduleDoc):
        return laws.ConstantSchedule(laws.Explicit(masses=tuple(doc.pmf)))
    if isinstance(doc, TableScheduleDoc):
        prefix = [to_schedule(d).law(0) for d in doc.prefix]
        return laws.TableSchedule(prefix, to_schedule(doc.tail))
    if isinstance(doc, GeometricScheduleDoc):
        return laws.FormulaSchedule("geometric", mean=_rule(doc.mean))
    if isinstance(doc, PoissonScheduleDoc):
        return laws.FormulaSchedule("poisson", mean=_rule(doc.mean))
    if isinstance(doc, BinomialScheduleDoc):
        return laws.FormulaSchedule("binomial", trials=_int_rule(doc.trials),
                                    success_prob=_rule(doc.success_prob))
    if isinstance(doc, BernoulliScheduleDoc):
        return laws.FormulaSchedule("bernoulli", a=_rule(doc.a))
    if isinstance(doc, TwoPointScheduleDoc):
        if doc.mean is not None:
            return laws.FormulaSchedule("twopoint", k=_int_rule(doc.k),
                                        mean=laws.ConstantRule(doc.mean))
        return laws.FormulaSchedule("twopoint", k=_int_rule(doc.k),
                                    prob=laws.ConstantRule(doc.prob))
    raise TypeError(f"unsupported schedule document {doc!r}")


def parse_schedule_document(payload) -> "ScheduleDoc":
    return _SCHEDULE_ADAPTER.validate_python(payload)


def schedule_hash(doc) -> str:
    canonical = json.dumps(
        doc.model_dump(mode="json", exclude_none=True), sort_keys=True,
        separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def schedule_json_schema() -> dict:
    return _SCHEDULE_ADAPTER.json_schema()


# -- analysis configuration --------------------------------------------------


class WitnessDoc(_Doc):
    """Weight sequence for the selection criteria; ``C=null`` runs the
    documented default search over (1.5, 2, 4)."""

    c: Param = 1.0
    C: float | None = None


class TailModelDoc(_Doc):
    kind: Literal["geometric_ratio", "monotone"]
    start: int = 0
    ratio: float | None = None
    direction: Literal["increasing", "decreasing"] | None = None

    @model_validator(mode="after")
    def _fields_match(self):
        if self.kind == "geometric_ratio" and self.ratio is None:
            raise ValueError("geometric_ratio tail model needs 'ratio'")
        if self.kind == "monotone" and self.direction is None:
            raise ValueError("monotone tail model needs 'direction'")
        return self


def to_witness(doc: WitnessDoc) -> criteria.Main1Witness:
    rule = _rule(doc.c)
    return criteria.Main1Witness(c=lambda n: float(rule(n)), scale=doc.C)


def to_tail_model(doc: TailModelDoc | None):
    if doc is None:
        return None
    if doc.kind == "geometric_ratio":
        return criteria.GeometricRatioTail(start=doc.start, ratio=doc.ratio)
    return criteria.MonotoneTail(direction=doc.direction, start=doc.start)


class AnalysisConfigDoc(_Doc):
    schedule: ScheduleDoc
    witness: WitnessDoc | None = None
    tail_model: TailModelDoc | None = None
    horizon: int = Field(default=400, ge=8)
    bpws_horizon: int | None = None
    stabilization_rel_tol: float = criteria.STABLE_REL_TOL
    n0: int = Field(default=0, ge=0)


# -- service requests --------------------------------------------------------


class AnalyzeRequest(_Doc):
    config: AnalysisConfigDoc


class CurveRequest(_Doc):
    schedule: ScheduleDoc
    horizon: int = Field(default=200, ge=1)


class CertificateRequest(_Doc):
    schedule: ScheduleDoc
    n0: int = Field(default=0, ge=0)
    horizon: int | None = None
    tolerance: float = 1e-10


class SimulateRequest(_Doc):
    schedule: ScheduleDoc
    horizon: int = Field(default=200, ge=1)
    replicas: int = Field(default=1000, ge=1)
    seed: int = 0
    cap: int = Field(default=10_000_000, ge=1)
    threads: int = Field(default=1, ge=1)
    trajectory: bool = False


class SelectRequest(_Doc):
    schedule: ScheduleDoc
    start_label: float = Field(default=0.0, ge=0.0, lt=1.0)
    horizon: int = Field(default=200, ge=1)
    replicas: int = Field(default=1000, ge=1)
    seed: int = 0
    cap: int = Field(default=1_000_000, ge=1)
    threads: int = Field(default=1, ge=1)
    interval: tuple[float, float] | None = None
    trajectory: bool = False


class PercolateRequest(_Doc):
    schedule: ScheduleDoc
    depth: int = Field(default=6, ge=1)
    replicas: int = Field(default=100_000, ge=1)
    seed: int = 0
    engine: Literal["frontier", "dfs"] = "frontier"


class ReproduceRequest(_Doc):
    example_id: str
    seed: int | None = None


# -- service responses -------------------------------------------------------


class Meta(_Doc):
    tool: str
    version: str
    seed: int | None
    schedule_hash: str
    config: dict
    wall_clock_s: float | None = None


class AnalyzeResponse(_Doc):
    meta: Meta
    verdicts: list[dict]


class CurveResponse(_Doc):
    meta: Meta
    horizon: int
    extinct_by_horizon: list[float]
    gap: float
    extinction_bracket: tuple[float, float]


class CertificateResponse(_Doc):
    meta: Meta
    certificate: dict


class SimulateResponse(_Doc):
    meta: Meta
    estimate: dict
    trajectory: list[tuple[int, int]] | None = None


class SelectResponse(_Doc):
    meta: Meta
    estimate: dict
    local_survival: dict | None = None
    trajectory: list[tuple[int, int, float, int]] | None = None


class PercolateResponse(_Doc):
    meta: Meta
    result: dict


class ReproduceResponse(_Doc):
    meta: Meta
    example_id: str
    title: str
    checks: list[dict]
    passed: bool
