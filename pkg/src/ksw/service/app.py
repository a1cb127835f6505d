"""FastAPI wiring over the shared handler layer."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import handlers
from .models import (
    CausalityRequest,
    DistanceRequest,
    ReconstructRequest,
    RunResult,
    SplitCausalityRequest,
    SplitRequest,
    VerifyRequest,
    WickRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="ksw", version="0.1.0")

    def run(fn, *args) -> RunResult:
        try:
            code, report = fn(*args)
        except handlers.HandlerError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return RunResult(exit_code=code, report=report)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/verify", response_model=RunResult)
    def verify(req: VerifyRequest) -> RunResult:
        return run(handlers.handle_verify, req.structure, req.tolerance, req.signature)

    @app.post("/distance", response_model=RunResult)
    def distance(req: DistanceRequest) -> RunResult:
        return run(handlers.handle_distance, req.graph, req.source, req.target)

    @app.post("/causality", response_model=RunResult)
    def causality(req: CausalityRequest) -> RunResult:
        return run(handlers.handle_causality, req.graph, req.tolerance)

    @app.post("/reconstruct", response_model=RunResult)
    def reconstruct(req: ReconstructRequest) -> RunResult:
        return run(handlers.handle_reconstruct, req.graph, req.tolerance)

    @app.post("/wick", response_model=RunResult)
    def wick(req: WickRequest) -> RunResult:
        return run(handlers.handle_wick, req.graph, req.sigma, req.tolerance, req.seed)

    @app.post("/split/verify", response_model=RunResult)
    def split_verify(req: SplitRequest) -> RunResult:
        return run(handlers.handle_split_verify, req.split, req.tolerance)

    @app.post("/split/reconstruct", response_model=RunResult)
    def split_reconstruct(req: SplitRequest) -> RunResult:
        return run(handlers.handle_split_reconstruct, req.split, req.tolerance)

    @app.post("/split/causality", response_model=RunResult)
    def split_causality(req: SplitCausalityRequest) -> RunResult:
        return run(handlers.handle_split_causality, req.split, req.method, req.tolerance)

    @app.post("/mvs-compare", response_model=RunResult)
    def mvs_compare(req: SplitRequest) -> RunResult:
        return run(handlers.handle_mvs_compare, req.split, req.tolerance)

    @app.post("/demo/{name}", response_model=RunResult)
    def demo(name: str, tolerance: float = 1e-9) -> RunResult:
        return run(handlers.handle_demo, name, tolerance)

    return app
