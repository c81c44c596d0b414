"""Request handlers shared by the HTTP service and the command-line client.

Each handler maps a validated request document onto the core library and
wraps the result with provenance metadata (tool version, seed, schedule
hash, config echo, wall clock).
"""

from __future__ import annotations

import hashlib
import json
import time

from .. import __version__, catalogue, criteria, genfun, sim
from ..schemas import (
    AnalysisConfigDoc,
    AnalyzeRequest,
    AnalyzeResponse,
    CertificateRequest,
    CertificateResponse,
    CurveRequest,
    CurveResponse,
    Meta,
    PercolateRequest,
    PercolateResponse,
    ReproduceRequest,
    ReproduceResponse,
    SelectRequest,
    SelectResponse,
    SimulateRequest,
    SimulateResponse,
    schedule_hash,
    to_schedule,
    to_tail_model,
    to_witness,
)

__all__ = ["analyze", "curve", "certificate", "simulate", "select",
           "percolate", "reproduce"]


def _meta(request_model, seed: int | None, started: float) -> Meta:
    echo = request_model.model_dump(mode="json", exclude_none=True)
    sched = echo.get("schedule") or echo.get("config", {}).get("schedule")
    if sched is not None:
        digest = hashlib.sha256(
            json.dumps(sched, sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()
    else:
        digest = hashlib.sha256(
            json.dumps(echo, sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()
    return Meta(
        tool="bpve",
        version=__version__,
        seed=seed,
        schedule_hash=digest,
        config=echo,
        wall_clock_s=round(time.perf_counter() - started, 6),
    )


def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    t0 = time.perf_counter()
    cfg: AnalysisConfigDoc = req.config
    sched = to_schedule(cfg.schedule)
    options = criteria.BatteryOptions(
        horizon=cfg.horizon,
        bpws_horizon=cfg.bpws_horizon,
        witness=to_witness(cfg.witness) if cfg.witness else None,
        tail_model=to_tail_model(cfg.tail_model),
        stab_rel_tol=cfg.stabilization_rel_tol,
        n0=cfg.n0,
    )
    verdicts = criteria.run_battery(sched, options)
    return AnalyzeResponse(meta=_meta(req, None, t0),
                           verdicts=[v.to_dict() for v in verdicts])


def curve(req: CurveRequest) -> CurveResponse:
    t0 = time.perf_counter()
    result = genfun.extinction_curve(to_schedule(req.schedule), req.horizon)
    return CurveResponse(
        meta=_meta(req, None, t0),
        horizon=result.horizon,
        extinct_by_horizon=list(result.values),
        gap=result.gap,
        extinction_bracket=(result.values[0], 1.0),
    )


def certificate(req: CertificateRequest) -> CertificateResponse:
    t0 = time.perf_counter()
    cert = genfun.build_survival_certificate(
        to_schedule(req.schedule), n0=req.n0, horizon=req.horizon,
        tolerance=req.tolerance)
    return CertificateResponse(meta=_meta(req, None, t0), certificate=cert.to_dict())


def simulate(req: SimulateRequest) -> SimulateResponse:
    t0 = time.perf_counter()
    sched = to_schedule(req.schedule)
    config = sim.SimConfig(horizon=req.horizon, replicas=req.replicas,
                           population_cap=req.cap, seed=req.seed,
                           threads=req.threads)
    estimate = sim.estimate_survival(sched, config)
    trajectory = None
    if req.trajectory:
        run = sim.run_bpve(sched, config, replica=0)
        trajectory = [(g, z) for g, z in enumerate(run.sizes)]
    return SimulateResponse(meta=_meta(req, req.seed, t0),
                            estimate=estimate.to_dict(), trajectory=trajectory)


def select(req: SelectRequest) -> SelectResponse:
    t0 = time.perf_counter()
    sched = to_schedule(req.schedule)
    config = sim.SimConfig(horizon=req.horizon, replicas=req.replicas,
                           population_cap=req.cap, seed=req.seed,
                           threads=req.threads)
    estimate = sim.estimate_bpws_survival(sched, req.start_label, config)
    local = None
    if req.interval is not None:
        local = sim.estimate_local_survival(
            sched, req.start_label, req.interval, config).to_dict()
    trajectory = None
    if req.trajectory:
        run = sim.run_bpws(sched, req.start_label, config, replica=0,
                           watch=req.interval)
        trajectory = [
            (g, n, l, w)
            for g, (n, l, w) in enumerate(zip(run.sizes, run.leftmost,
                                              run.watch_counts))
        ]
    return SelectResponse(meta=_meta(req, req.seed, t0),
                          estimate=estimate.to_dict(),
                          local_survival=local, trajectory=trajectory)


def percolate(req: PercolateRequest) -> PercolateResponse:
    t0 = time.perf_counter()
    result = sim.count_accessible_paths(
        to_schedule(req.schedule), req.depth, req.replicas, req.seed,
        engine=req.engine)
    return PercolateResponse(meta=_meta(req, req.seed, t0), result=result.to_dict())


def reproduce(req: ReproduceRequest) -> ReproduceResponse:
    t0 = time.perf_counter()
    report = catalogue.run_example(req.example_id, seed=req.seed)
    return ReproduceResponse(
        meta=_meta(req, req.seed, t0),
        example_id=report["example_id"],
        title=report["title"],
        checks=report["checks"],
        passed=report["passed"],
    )
