"""Global sparse system assembly and solvers.

Interior row i carries the Laplacian weights of node i scattered to its
stencil columns with right-hand side f(x_i); boundary row j is an identity
row with right-hand side g(x_j). Boundary rows stay in the system, keeping
the natural N x N indexing.

Two solve paths: a hand-rolled BiCGSTAB with Jacobi preconditioning (the
production path) and a dense LU solve that doubles as a small-N oracle.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import (
    Breakdown,
    MissingWeights,
    NotConverged,
    SingularMatrix,
    TooLargeForDense,
)
from .nodes import NodeSet
from .weights import StencilTable, WeightTable

DENSE_LIMIT = 3000


@dataclass(frozen=True)
class LinearSystem:
    """Sparse row-major operator and right-hand side for the discretized PDE."""

    matrix: sp.csr_matrix
    b: np.ndarray
    boundary: np.ndarray  # (N,) bool, true on Dirichlet rows

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(row, col, value) triplets in row-major order."""
        coo = self.matrix.tocoo()
        return coo.row, coo.col, coo.data

    def to_matrix_market(self) -> str:
        """MatrixMarket coordinate text, for external verification."""
        buf = io.BytesIO()
        from scipy.io import mmwrite

        mmwrite(buf, self.matrix)
        return buf.getvalue().decode()


@dataclass(frozen=True)
class SolveReport:
    """Solution plus convergence facts of one solver run."""

    u: np.ndarray
    iterations: int
    residual: float  # relative, |Ax - b| / |b|
    method: str


def relative_residual(system: LinearSystem, u: np.ndarray) -> float:
    r = system.b - system.matrix @ u
    nb = float(np.linalg.norm(system.b))
    return float(np.linalg.norm(r)) / nb if nb > 0 else float(np.linalg.norm(r))


def assemble(nodes: NodeSet, stencils: StencilTable, weights: WeightTable, f, g) -> LinearSystem:
    """Build the global system from per-node weights and Dirichlet data.

    f and g map an (N, 2) point array to (N,) samples. Raises MissingWeights
    when an interior node has no weight row.
    """
    n_total = len(nodes)
    covered = set(map(int, weights.node_ids))
    for i in nodes.interior_ids:
        if int(i) not in covered:
            raise MissingWeights(int(i))

    lengths = stencils.sizes
    rows = np.concatenate(
        [np.repeat(stencils.node_ids, lengths), nodes.boundary_ids]
    )
    cols = np.concatenate([np.concatenate(stencils.rows), nodes.boundary_ids])
    vals = np.concatenate([np.concatenate(weights.rows), np.ones(nodes.n_boundary)])

    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(n_total, n_total))
    matrix.sort_indices()

    b = np.empty(n_total)
    interior = nodes.interior_ids
    b[interior] = f(nodes.points[interior])
    b[nodes.boundary_ids] = g(nodes.points[nodes.boundary_ids])
    return LinearSystem(matrix=matrix, b=b, boundary=nodes.boundary.copy())


def solve_iterative(
    system: LinearSystem, tol: float = 1e-10, max_iter: int | None = None
) -> SolveReport:
    """Jacobi-preconditioned BiCGSTAB from a zero initial guess.

    Converges when |Ax - b| / |b| <= tol; the reported residual is always
    recomputed from the returned solution. Raises NotConverged past max_iter
    (default 10 N) and Breakdown on zero inner-product pivots.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    a = system.matrix
    b = system.b
    n = system.n
    if max_iter is None:
        max_iter = 10 * n

    diag = a.diagonal().copy()
    diag[diag == 0.0] = 1.0  # keep the preconditioner invertible on defect rows

    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return SolveReport(u=np.zeros(n), iterations=0, residual=0.0, method="bicgstab")

    x = np.zeros(n)
    r = b - a @ x
    r0 = r.copy()
    rho_prev = 1.0
    alpha = 1.0
    omega = 1.0
    v = np.zeros(n)
    p = np.zeros(n)
    fresh = True  # start of a (re)started cycle

    iterations = 0
    while True:
        if float(np.linalg.norm(r)) / norm_b <= tol:
            # Recurrence says done; trust but verify against the true residual
            # and restart the Krylov cycle if it drifted.
            residual = relative_residual(system, x)
            if residual <= tol:
                return SolveReport(
                    u=x, iterations=iterations, residual=residual, method="bicgstab"
                )
            r = b - a @ x
            r0 = r.copy()
            fresh = True
        if iterations >= max_iter:
            raise NotConverged(iterations, relative_residual(system, x))
        iterations += 1

        rho = float(r0 @ r)
        if rho == 0.0:
            raise Breakdown(f"rho vanished at iteration {iterations}")
        if fresh:
            p = r.copy()
            fresh = False
        else:
            beta = (rho / rho_prev) * (alpha / omega)
            p = r + beta * (p - omega * v)
        p_hat = p / diag
        v = a @ p_hat
        denom = float(r0 @ v)
        if denom == 0.0:
            raise Breakdown(f"r0.v vanished at iteration {iterations}")
        alpha = rho / denom
        s = r - alpha * v
        x = x + alpha * p_hat
        if float(np.linalg.norm(s)) / norm_b <= tol:
            r = s
            continue
        s_hat = s / diag
        t = a @ s_hat
        tt = float(t @ t)
        if tt == 0.0:
            raise Breakdown(f"t.t vanished at iteration {iterations}")
        omega = float(t @ s) / tt
        if omega == 0.0:
            raise Breakdown(f"omega vanished at iteration {iterations}")
        x = x + omega * s_hat
        r = s - omega * t
        rho_prev = rho


def solve_direct_dense(system: LinearSystem) -> SolveReport:
    """Dense LU (partial pivoting) control solve, guarded to N <= 3000."""
    n = system.n
    if n > DENSE_LIMIT:
        raise TooLargeForDense(f"N={n} exceeds dense limit {DENSE_LIMIT}")
    dense = system.matrix.toarray()
    try:
        x = np.linalg.solve(dense, system.b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    return SolveReport(
        u=x,
        iterations=1,
        residual=relative_residual(system, x),
        method="dense_lu",
    )


def solve(system: LinearSystem, method: str = "iterative", tol: float = 1e-10,
          max_iter: int | None = None) -> SolveReport:
    """Dispatch on the solver tag used in experiment configs."""
    if method == "iterative":
        return solve_iterative(system, tol=tol, max_iter=max_iter)
    if method == "dense":
        return solve_direct_dense(system)
    raise ValueError(f"unknown solver {method!r} (expected 'iterative' or 'dense')")
