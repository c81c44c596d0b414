"""HTTP front end: stateless analysis and simulation endpoints.

Every endpoint is a pure request/response wrapper over the core library;
identical requests yield identical results (wall clock aside), so the
service can sit behind any number of workers.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, catalogue
from ..criteria import ContradictionError
from ..schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CertificateRequest,
    CertificateResponse,
    CurveRequest,
    CurveResponse,
    PercolateRequest,
    PercolateResponse,
    ReproduceRequest,
    ReproduceResponse,
    SelectRequest,
    SelectResponse,
    SimulateRequest,
    SimulateResponse,
)
from . import handlers

app = FastAPI(
    title="bpve",
    version=__version__,
    description="Survival and extinction analysis for branching processes "
                "in varying environment, with selection and Monte Carlo "
                "cross-checks.",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/version")
def version() -> dict:
    return {"tool": "bpve", "version": __version__}


@app.get("/examples")
def examples() -> dict:
    return {"examples": [
        {"id": eid, "title": catalogue.CATALOGUE[eid].title}
        for eid in catalogue.example_ids()
    ]}


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    try:
        return handlers.analyze(req)
    except ContradictionError as exc:
        raise HTTPException(status_code=500,
                            detail={"error": "contradiction", "message": str(exc)})
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/extinction-curve", response_model=CurveResponse)
def extinction_curve(req: CurveRequest) -> CurveResponse:
    try:
        return handlers.curve(req)
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/certificate", response_model=CertificateResponse)
def certificate(req: CertificateRequest) -> CertificateResponse:
    try:
        return handlers.certificate(req)
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    try:
        return handlers.simulate(req)
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/select", response_model=SelectResponse)
def select(req: SelectRequest) -> SelectResponse:
    try:
        return handlers.select(req)
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/percolate", response_model=PercolateResponse)
def percolate(req: PercolateRequest) -> PercolateResponse:
    try:
        return handlers.percolate(req)
    except (ValueError, OverflowError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/reproduce", response_model=ReproduceResponse)
def reproduce(req: ReproduceRequest) -> ReproduceResponse:
    try:
        return handlers.reproduce(req)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
