"""Signed pointwise errors, their aggregates, and the sign-balance indicator.

All error fields live on interior nodes only; boundary values are pinned by
the Dirichlet rows and carry no information. The sign-balance indicator is

    dN = (#{e > 0} - #{e < 0}) / N_int

with exact zeros counted in neither set but kept in the denominator. Its
magnitude is 1 exactly when every nonzero error shares one sign and no error
vanishes; a drop in |dN| localizes the accuracy minima of a stencil-size
sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInterior, TooShort
from .nodes import NodeSet
from .weights import StencilTable, WeightTable


@dataclass(frozen=True)
class ErrorReport:
    """Per-node signed errors and summary metrics for one (h, n) configuration."""

    e_poiss: np.ndarray  # interior nodes, solution error
    e_lap: np.ndarray  # interior nodes, Laplacian consistency error
    e_poiss_max: float
    e_poiss_avg: float
    e_lap_max: float
    e_lap_avg: float
    dn_poiss: float
    dn_lap: float
    h: float
    n: object  # int for uniform stencils, mapping/description otherwise


def signed_solution_error(u_hat: np.ndarray, u_exact, nodes: NodeSet) -> np.ndarray:
    """e(x_i) = u_hat_i - u(x_i) on interior nodes, in interior-id order."""
    interior = nodes.interior_ids
    return u_hat[interior] - u_exact(nodes.points[interior])


def signed_laplacian_error(
    weights: WeightTable, stencils: StencilTable, u_exact, f, nodes: NodeSet
) -> np.ndarray:
    """Discrete Laplacian applied to exact solution samples, minus f.

    This is the operator consistency error: weights act on u(x_j) over each
    stencil, so it needs no PDE solve.
    """
    if len(stencils) == 0:
        return np.empty(0)
    u_all = u_exact(nodes.points)
    flat_cols = np.concatenate(stencils.rows)
    flat_w = np.concatenate(weights.rows)
    lengths = stencils.sizes
    offsets = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    lap = np.add.reduceat(flat_w * u_all[flat_cols], offsets)
    return lap - f(nodes.points[stencils.node_ids])


def aggregate(errors: np.ndarray, n_int: int | None = None) -> tuple[float, float]:
    """(max |e|, mean |e|) over interior nodes; denominator is N_int."""
    errors = np.asarray(errors, dtype=float)
    if n_int is None:
        n_int = len(errors)
    if n_int < 1:
        raise EmptyInterior("aggregate needs at least one interior node")
    abs_e = np.abs(errors)
    return float(abs_e.max()), float(abs_e.sum() / n_int)


def delta_n(errors: np.ndarray, n_int: int | None = None) -> float:
    """Normalized signed-count difference (#positive - #negative) / N_int.

    Exact zeros join neither count but stay in the denominator, so a field
    with zeros cannot reach magnitude 1.
    """
    errors = np.asarray(errors, dtype=float)
    if n_int is None:
        n_int = len(errors)
    if n_int < 1:
        raise EmptyInterior("delta_n needs at least one interior node")
    pos = int(np.count_nonzero(errors > 0))
    neg = int(np.count_nonzero(errors < 0))
    return (pos - neg) / n_int


def detect_local_extrema(curve) -> tuple[list[int], list[int]]:
    """Indices of strict interior minima and maxima of a sampled curve.

    Accepts a 1D value sequence or (n, value) pairs. A plateau flanked by
    strictly higher (lower) values is reported once, at its first index;
    endpoints are never reported.
    """
    arr = np.asarray(curve, dtype=float)
    if arr.ndim == 2:
        arr = arr[:, 1]
    if arr.ndim != 1:
        raise ValueError(f"curve must be 1D values or (n, value) pairs, got shape {arr.shape}")
    if len(arr) < 3:
        raise TooShort(f"need at least 3 samples, got {len(arr)}")

    minima: list[int] = []
    maxima: list[int] = []
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[j + 1] == arr[i]:
            j += 1
        # plateau arr[i..j]; interior iff flanked on both sides
        if i > 0 and j < len(arr) - 1:
            left, right = arr[i - 1], arr[j + 1]
            if left > arr[i] and right > arr[i]:
                minima.append(i)
            elif left < arr[i] and right < arr[i]:
                maxima.append(i)
        i = j + 1
    return minima, maxima


def build_error_report(
    u_hat: np.ndarray,
    nodes: NodeSet,
    stencils: StencilTable,
    weights: WeightTable,
    u_exact,
    f,
    h: float,
    n,
) -> ErrorReport:
    """Evaluate both error fields and all aggregates for one solved configuration."""
    if nodes.n_interior < 1:
        raise EmptyInterior("no interior nodes to evaluate")
    e_poiss = signed_solution_error(u_hat, u_exact, nodes)
    e_lap = signed_laplacian_error(weights, stencils, u_exact, f, nodes)
    ep_max, ep_avg = aggregate(e_poiss)
    el_max, el_avg = aggregate(e_lap)
    return ErrorReport(
        e_poiss=e_poiss,
        e_lap=e_lap,
        e_poiss_max=ep_max,
        e_poiss_avg=ep_avg,
        e_lap_max=el_max,
        e_lap_avg=el_avg,
        dn_poiss=delta_n(e_poiss),
        dn_lap=delta_n(e_lap),
        h=h,
        n=n,
    )
