"""FastAPI service exposing the experiment runners.

Runs are synchronous: a request computes the experiment and returns its
summary plus every artifact as text, so clients own persistence. Domain
errors map to 422 with the error class name in the payload; malformed
configs are rejected by FastAPI's own validation layer.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .errors import RbffdError
from .experiments import RUNNERS, RunResult
from .schemas import ExperimentConfig, HealthResponse, RunResponse

app = FastAPI(
    title="rbffdlab",
    version=__version__,
    description="Meshless RBF-FD Poisson solver and stencil-size experiments",
)


def _run(kind: str, cfg: ExperimentConfig) -> RunResponse:
    try:
        result: RunResult = RUNNERS[kind](cfg)
    except RbffdError as exc:
        raise HTTPException(
            status_code=422,
            detail={"error": type(exc).__name__, "message": str(exc)},
        ) from exc
    except ValueError as exc:
        raise HTTPException(
            status_code=400,
            detail={"error": "ValueError", "message": str(exc)},
        ) from exc
    return RunResponse(kind=result.kind, summary=result.summary, artifacts=result.artifacts)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/solve", response_model=RunResponse)
def solve_endpoint(cfg: ExperimentConfig) -> RunResponse:
    return _run("solve", cfg)


@app.post("/sweep", response_model=RunResponse)
def sweep_endpoint(cfg: ExperimentConfig) -> RunResponse:
    return _run("sweep", cfg)


@app.post("/converge", response_model=RunResponse)
def converge_endpoint(cfg: ExperimentConfig) -> RunResponse:
    return _run("converge", cfg)


@app.post("/split", response_model=RunResponse)
def split_endpoint(cfg: ExperimentConfig) -> RunResponse:
    return _run("split", cfg)


@app.post("/signfield", response_model=RunResponse)
def signfield_endpoint(cfg: ExperimentConfig) -> RunResponse:
    return _run("signfield", cfg)
