"""Experiment runners: the five run kinds behind the service and the CLI.

Each runner turns an ExperimentConfig into a RunResult holding a JSON-able
summary and the text content of every artifact (CSV files plus run.json).
Artifacts are produced in memory so the HTTP service can ship them to
clients without touching a shared disk; write_artifacts persists them.

Every CSV is a pure function of the config: node generation is seeded, the
solvers are deterministic, and floats are rendered with repr (shortest
round-trip). run.json additionally carries wall-clock timings and is the
one artifact allowed to differ between identical runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .errors import RbffdError, TooFewPoints
from .metrics import ErrorReport, build_error_report, detect_local_extrema
from .neighbors import NeighborIndex, build_index
from .nodes import (
    FAR,
    NEAR_BOUNDARY,
    DiscDomain,
    NodeSet,
    Point2,
    generate_nodes,
    split_regions,
)
from .problem import SINE_PRODUCT, PoissonProblem
from .schemas import ExperimentConfig
from .system import SolveReport, assemble, solve
from .weights import StencilTable, WeightTable, build_weight_table

DEFAULT_H_LIST = [0.04, 0.02, 0.01]
DEFAULT_N_LIST = [17, 28, 35, 46]

SWEEP_HEADER = "n,e_poiss_max,e_poiss_avg,e_lap_max,e_lap_avg,dN_poiss,dN_lap,iters,residual"
CONVERGENCE_HEADER = "h,n,e_poiss_max,e_poiss_avg,e_lap_avg,slope_note"
SPLIT_HEADER = "n,mode,e_poiss_max,e_poiss_avg,dN_poiss"
SIGNFIELD_HEADER = "x,y,e_poiss,e_lap,region"


@dataclass
class RunResult:
    kind: str
    summary: dict
    artifacts: dict[str, str] = field(default_factory=dict)


def write_artifacts(result: RunResult, out_dir: str | Path) -> list[Path]:
    """Persist every artifact under out_dir; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in result.artifacts.items():
        path = out / name
        path.write_text(content)
        written.append(path)
    return written


def _fmt(v: float) -> str:
    return repr(float(v))


class _Stages:
    """Wall-clock accounting, one bucket per pipeline stage."""

    def __init__(self):
        self.seconds: dict[str, float] = {}

    def add(self, stage: str, t0: float):
        self.seconds[stage] = self.seconds.get(stage, 0.0) + (time.perf_counter() - t0)


def _domain(cfg: ExperimentConfig) -> DiscDomain:
    return DiscDomain(center=Point2(*cfg.center), radius=cfg.radius)


def _generate(cfg: ExperimentConfig, stages: _Stages, h: float | None = None,
              seed: int | None = None) -> NodeSet:
    t0 = time.perf_counter()
    nodes = generate_nodes(
        _domain(cfg),
        cfg.h if h is None else h,
        seed=cfg.seed if seed is None else seed,
        k_candidates=cfg.k_candidates,
    )
    stages.add("nodes", t0)
    return nodes


def _evaluate(
    cfg: ExperimentConfig,
    nodes: NodeSet,
    index: NeighborIndex,
    n_per_node,
    stages: _Stages,
    h: float,
    n_label,
    problem: PoissonProblem = SINE_PRODUCT,
) -> tuple[ErrorReport, SolveReport, StencilTable, WeightTable]:
    """Weights -> assembly -> solve -> error report for one configuration."""
    t0 = time.perf_counter()
    stencils, weights = build_weight_table(nodes, index, n_per_node)
    stages.add("weights", t0)
    t0 = time.perf_counter()
    system = assemble(nodes, stencils, weights, problem.f, problem.g)
    stages.add("assemble", t0)
    t0 = time.perf_counter()
    solved = solve(system, method=cfg.solver, tol=cfg.tol, max_iter=cfg.max_iter)
    stages.add("solve", t0)
    t0 = time.perf_counter()
    report = build_error_report(
        solved.u, nodes, stencils, weights, problem.u, problem.f, h, n_label
    )
    stages.add("metrics", t0)
    return report, solved, stencils, weights


def _signfield_csv(nodes: NodeSet, report: ErrorReport, regions: np.ndarray) -> str:
    interior = nodes.interior_ids
    lines = [SIGNFIELD_HEADER]
    for row, i in enumerate(interior):
        x, y = nodes.points[i]
        lines.append(
            f"{_fmt(x)},{_fmt(y)},{_fmt(report.e_poiss[row])},"
            f"{_fmt(report.e_lap[row])},{regions[i]}"
        )
    return "\n".join(lines) + "\n"


def _run_json(cfg: ExperimentConfig, kind: str, stages: _Stages, extra: dict) -> str:
    payload = {
        "kind": kind,
        "version": __version__,
        "config": cfg.model_dump(),
        "timings_s": {k: round(v, 4) for k, v in stages.seconds.items()},
    }
    payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _counts(nodes: NodeSet) -> dict:
    return {
        "total": len(nodes),
        "boundary": nodes.n_boundary,
        "interior": nodes.n_interior,
    }


def run_solve(cfg: ExperimentConfig) -> RunResult:
    """Solve one (h, n) configuration and dump its sign field."""
    if cfg.n is None:
        raise ValueError("solve requires a stencil size n")
    stages = _Stages()
    nodes = _generate(cfg, stages)
    index = build_index(nodes)
    report, solved, _, _ = _evaluate(cfg, nodes, index, cfg.n, stages, cfg.h, cfg.n)
    regions = split_regions(nodes, _domain(cfg), cfg.r_split)

    summary = {
        "h": cfg.h,
        "n": cfg.n,
        "e_poiss_max": report.e_poiss_max,
        "e_poiss_avg": report.e_poiss_avg,
        "e_lap_max": report.e_lap_max,
        "e_lap_avg": report.e_lap_avg,
        "dN_poiss": report.dn_poiss,
        "dN_lap": report.dn_lap,
        "iters": solved.iterations,
        "residual": solved.residual,
        "nodes": _counts(nodes),
    }
    artifacts = {
        "nodes.csv": nodes.to_csv(),
        f"signfield_n{cfg.n}.csv": _signfield_csv(nodes, report, regions),
    }
    artifacts["run.json"] = _run_json(cfg, "solve", stages, {"summary": summary})
    return RunResult(kind="solve", summary=summary, artifacts=artifacts)


def _sweep_rows(
    cfg: ExperimentConfig,
    nodes: NodeSet,
    index: NeighborIndex,
    stages: _Stages,
    n_for: Callable[[int], np.ndarray] | None = None,
):
    """Evaluate every n in [n_min, n_max]; failures are recorded, not raised."""
    rows, failures = [], []
    for n in range(cfg.n_min, cfg.n_max + 1):
        n_per_node = n if n_for is None else n_for(n)
        try:
            report, solved, _, _ = _evaluate(
                cfg, nodes, index, n_per_node, stages, cfg.h, n
            )
        except RbffdError as exc:
            failures.append({"n": n, "error": type(exc).__name__, "message": str(exc)})
            continue
        rows.append((n, report, solved))
    return rows, failures


def _extrema_ns(rows) -> tuple[list[int], list[int]]:
    """n positions of interior minima/maxima of e_poiss_max over sweep rows."""
    if len(rows) < 3:
        return [], []
    values = [r[1].e_poiss_max for r in rows]
    minima, maxima = detect_local_extrema(values)
    ns = [r[0] for r in rows]
    return [ns[i] for i in minima], [ns[i] for i in maxima]


def run_sweep(cfg: ExperimentConfig) -> RunResult:
    """Sweep the stencil size over one fixed node set."""
    stages = _Stages()
    nodes = _generate(cfg, stages)
    index = build_index(nodes)
    rows, failures = _sweep_rows(cfg, nodes, index, stages)

    lines = [SWEEP_HEADER]
    for n, rep, solved in rows:
        lines.append(
            f"{n},{_fmt(rep.e_poiss_max)},{_fmt(rep.e_poiss_avg)},"
            f"{_fmt(rep.e_lap_max)},{_fmt(rep.e_lap_avg)},"
            f"{_fmt(rep.dn_poiss)},{_fmt(rep.dn_lap)},"
            f"{solved.iterations},{_fmt(solved.residual)}"
        )
    minima, maxima = _extrema_ns(rows)

    summary = {
        "rows": len(rows),
        "minima_n": minima,
        "maxima_n": maxima,
        "failures": failures,
        "nodes": _counts(nodes),
    }
    artifacts = {
        "sweep.csv": "\n".join(lines) + "\n",
        "nodes.csv": nodes.to_csv(),
    }
    artifacts["run.json"] = _run_json(cfg, "sweep", stages, {"summary": summary})
    return RunResult(kind="sweep", summary=summary, artifacts=artifacts)


def _loglog_slope(hs: list[float], errs: list[float]) -> float:
    """Least-squares slope of log(err) against log(h)."""
    lx = np.log(np.asarray(hs))
    ly = np.log(np.asarray(errs))
    return float(np.polyfit(lx, ly, 1)[0])


def run_convergence(cfg: ExperimentConfig) -> RunResult:
    """Refinement study: every n over every h, with log-log slopes per n.

    Nodes are regenerated per h with derived seeds (seed + index); the slope
    of each n appears in the slope_note column of all its rows.
    """
    h_list = cfg.h_list if cfg.h_list is not None else DEFAULT_H_LIST
    n_list = cfg.n_list if cfg.n_list is not None else DEFAULT_N_LIST
    if len(h_list) < 3:
        raise TooFewPoints(f"convergence needs >= 3 h values, got {len(h_list)}")

    stages = _Stages()
    results: dict[tuple[float, int], ErrorReport] = {}
    seeds, counts = {}, {}
    for ih, h in enumerate(h_list):
        seed = cfg.seed + ih
        nodes = _generate(cfg, stages, h=h, seed=seed)
        seeds[str(h)] = seed
        counts[str(h)] = _counts(nodes)
        index = build_index(nodes)
        for n in n_list:
            report, _, _, _ = _evaluate(cfg, nodes, index, n, stages, h, n)
            results[(h, n)] = report

    slopes = {
        n: _loglog_slope(list(h_list), [results[(h, n)].e_poiss_max for h in h_list])
        for n in n_list
    }

    lines = [CONVERGENCE_HEADER]
    for h in h_list:
        for n in n_list:
            rep = results[(h, n)]
            lines.append(
                f"{_fmt(h)},{n},{_fmt(rep.e_poiss_max)},{_fmt(rep.e_poiss_avg)},"
                f"{_fmt(rep.e_lap_avg)},slope={slopes[n]:.4f}"
            )

    summary = {
        "slopes": {str(n): slopes[n] for n in n_list},
        "h_list": list(h_list),
        "n_list": list(n_list),
        "seeds": seeds,
        "nodes": counts,
    }
    artifacts = {"convergence.csv": "\n".join(lines) + "\n"}
    artifacts["run.json"] = _run_json(cfg, "converge", stages, {"summary": summary})
    return RunResult(kind="converge", summary=summary, artifacts=artifacts)


def run_boundary_split(cfg: ExperimentConfig) -> RunResult:
    """Sweep with one region pinned at fixed_n, next to the unfixed baseline.

    fixed_region selects the pinned side ('near_boundary' or 'far'); labels
    apply to interior nodes only, since boundary nodes carry no stencil.
    """
    if cfg.fixed_region == "none":
        raise ValueError("split requires fixed_region of 'near_boundary' or 'far'")
    stages = _Stages()
    nodes = _generate(cfg, stages)
    index = build_index(nodes)
    regions = split_regions(nodes, _domain(cfg), cfg.r_split)

    pinned_label = NEAR_BOUNDARY if cfg.fixed_region == "near_boundary" else FAR
    mode = "near_fixed" if cfg.fixed_region == "near_boundary" else "far_fixed"
    pinned_mask = regions == pinned_label  # over all nodes; interior rows used

    def n_for(n: int) -> np.ndarray:
        out = np.full(len(nodes), n)
        out[pinned_mask] = cfg.fixed_n
        return out

    baseline_rows, base_failures = _sweep_rows(cfg, nodes, index, stages)
    fixed_rows, fixed_failures = _sweep_rows(cfg, nodes, index, stages, n_for=n_for)

    lines = [SPLIT_HEADER]
    for tag, rows in (("baseline", baseline_rows), (mode, fixed_rows)):
        for n, rep, _ in rows:
            lines.append(
                f"{n},{tag},{_fmt(rep.e_poiss_max)},{_fmt(rep.e_poiss_avg)},"
                f"{_fmt(rep.dn_poiss)}"
            )

    base_minima, _ = _extrema_ns(baseline_rows)
    fixed_minima, _ = _extrema_ns(fixed_rows)
    summary = {
        "mode": mode,
        "fixed_n": cfg.fixed_n,
        "r_split": cfg.r_split,
        "baseline_minima_n": base_minima,
        "fixed_minima_n": fixed_minima,
        "failures": base_failures + fixed_failures,
        "pinned_interior_nodes": int(np.count_nonzero(pinned_mask & ~nodes.boundary)),
        "nodes": _counts(nodes),
    }
    artifacts = {
        "split.csv": "\n".join(lines) + "\n",
        "nodes.csv": nodes.to_csv(),
    }
    artifacts["run.json"] = _run_json(cfg, "split", stages, {"summary": summary})
    return RunResult(kind="split", summary=summary, artifacts=artifacts)


def run_sign_field(cfg: ExperimentConfig) -> RunResult:
    """Per-node signed error fields for a list of stencil sizes."""
    n_list = cfg.n_list if cfg.n_list is not None else DEFAULT_N_LIST
    stages = _Stages()
    nodes = _generate(cfg, stages)
    index = build_index(nodes)
    regions = split_regions(nodes, _domain(cfg), cfg.r_split)

    artifacts = {"nodes.csv": nodes.to_csv()}
    dns = {}
    for n in n_list:
        report, _, _, _ = _evaluate(cfg, nodes, index, n, stages, cfg.h, n)
        artifacts[f"signfield_n{n}.csv"] = _signfield_csv(nodes, report, regions)
        dns[str(n)] = {"dN_poiss": report.dn_poiss, "dN_lap": report.dn_lap}

    summary = {"n_list": list(n_list), "dN": dns, "nodes": _counts(nodes)}
    artifacts["run.json"] = _run_json(cfg, "signfield", stages, {"summary": summary})
    return RunResult(kind="signfield", summary=summary, artifacts=artifacts)


RUNNERS = {
    "solve": run_solve,
    "sweep": run_sweep,
    "converge": run_convergence,
    "split": run_boundary_split,
    "signfield": run_sign_field,
}
