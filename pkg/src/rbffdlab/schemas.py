"""Pydantic models shared by the HTTP service, the CLI client, and the runners."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

#: Minimum stencil size admitted anywhere: the degree-3 monomial count.
MIN_STENCIL = 10


class ExperimentConfig(BaseModel):
    """Fully resolved configuration of one experiment run.

    A single model covers all five run kinds; fields irrelevant to a kind
    keep their defaults. Every run is a pure function of this object.
    """

    model_config = ConfigDict(extra="forbid")

    center: tuple[float, float] = (0.5, 0.5)
    radius: float = Field(default=0.5, gt=0)
    h: float = Field(default=0.01, gt=0)
    # Single n (solve) is only sanity-checked here; unisolvency violations
    # surface from the weight computation as InsufficientStencil.
    n: int | None = Field(default=None, ge=1)
    n_min: int = Field(default=13, ge=MIN_STENCIL)
    n_max: int = Field(default=69, ge=MIN_STENCIL)
    h_list: list[float] | None = None
    n_list: list[int] | None = None
    seed: int = 0
    k_candidates: int = Field(default=15, ge=1)
    solver: Literal["iterative", "dense"] = "iterative"
    tol: float = Field(default=1e-10, gt=0)
    max_iter: int | None = Field(default=None, ge=1)
    r_split: float = Field(default=0.4, gt=0)
    fixed_region: Literal["none", "near_boundary", "far"] = "none"
    fixed_n: int = Field(default=28, ge=1)
    out: str | None = None

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.n_min > self.n_max:
            raise ValueError(f"n_min={self.n_min} exceeds n_max={self.n_max}")
        if not self.r_split < self.radius:
            raise ValueError(f"r_split={self.r_split} must be below radius={self.radius}")
        if self.h_list is not None and any(h <= 0 for h in self.h_list):
            raise ValueError("h_list entries must be positive")
        if self.n_list is not None and any(n < 1 for n in self.n_list):
            raise ValueError("n_list entries must be >= 1")
        return self


class RunResponse(BaseModel):
    """What every experiment endpoint returns: a summary plus named artifacts."""

    kind: str
    summary: dict
    artifacts: dict[str, str]  # filename -> file content


class HealthResponse(BaseModel):
    status: str
    version: str
