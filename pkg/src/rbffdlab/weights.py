"""RBF-FD Laplacian weights from cubic polyharmonic splines with monomial augmentation.

Per interior node, the weight vector w solves the local saddle-point system

    [ A  P ] [ w ]   [ lap_phi ]
    [ P' 0 ] [ l ] = [ lap_p   ]

with A_jk = |x_j - x_k|^3 over the stencil, P the monomials up to degree m
sampled on the stencil, and the right-hand side the analytic Laplacians of
those basis functions at the stencil center. The multipliers l are discarded.
Solving in shifted-and-scaled local coordinates keeps the system conditioned;
weights are rescaled by 1/s^2 afterwards since the Laplacian is homogeneous
of order 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import InsufficientStencil, SingularSystem
from .neighbors import NeighborIndex, k_nearest_table
from .nodes import NodeSet

# Pivots below this fraction of their row's original magnitude flag the
# system as singular (coincident or degenerate stencil nodes).
PIVOT_REL_TOL = 1e-14

# Batched local solves are chunked to keep the working set cache-friendly.
_CHUNK = 128


@dataclass(frozen=True)
class MonomialBasis:
    """All 2D monomials x^a y^b with a+b <= degree, in graded-lex order."""

    degree: int
    exponents: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        exps = [
            (d - b, b) for d in range(self.degree + 1) for b in range(d + 1)
        ]
        object.__setattr__(self, "exponents", tuple(exps))

    @property
    def q(self) -> int:
        return len(self.exponents)


#: Default augmentation: degree 3, q = 10 monomials.
CUBIC_BASIS = MonomialBasis(3)


def phs_laplacian(r):
    """Laplacian of the cubic PHS phi(r) = r^3 in 2D: phi'' + phi'/r = 9r."""
    return 9.0 * np.asarray(r, dtype=float)


def monomial_laplacian(exponents: tuple[int, int], point) -> float:
    """Laplacian of x^a y^b evaluated at a point.

    d2/dx2 + d2/dy2 = a(a-1) x^(a-2) y^b + b(b-1) x^a y^(b-2); terms with
    exponent below 2 vanish identically.
    """
    a, b = exponents
    if a < 0 or b < 0:
        raise ValueError(f"exponents must be non-negative, got {(a, b)}")
    x, y = float(point[0]), float(point[1])
    out = 0.0
    if a >= 2:
        out += a * (a - 1) * x ** (a - 2) * y**b
    if b >= 2:
        out += b * (b - 1) * x**a * y ** (b - 2)
    return out


def _monomials_at(points: np.ndarray, basis: MonomialBasis) -> np.ndarray:
    """Sample every basis monomial on (..., 2) points -> (..., q)."""
    x = points[..., 0]
    y = points[..., 1]
    cols = [x**a * y**b for a, b in basis.exponents]
    return np.stack(cols, axis=-1)


def _lu_solve_batched(mats: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, int]:
    """Solve a batch of dense systems by LU with partial pivoting.

    mats is (B, m, m), rhs is (B, m). Returns (solutions, -1), or
    (partial, batch_index) as soon as some system trips the relative pivot
    tolerance, so callers can name the offending stencil.
    """
    a = np.array(mats, dtype=float)
    x = np.array(rhs, dtype=float)
    nbatch, m, _ = a.shape
    scale = np.abs(a).max(axis=2)  # original row magnitudes, permuted alongside
    rows = np.arange(nbatch)
    for k in range(m):
        piv_rel = np.abs(a[:, k:, k]).argmax(axis=1) + k
        piv = a[rows, piv_rel, k]
        bad = np.abs(piv) <= PIVOT_REL_TOL * scale[rows, piv_rel]
        if bad.any():
            return x, int(np.nonzero(bad)[0][0])
        swap = np.nonzero(piv_rel != k)[0]
        if len(swap):
            pr = piv_rel[swap]
            for arr in (a, x, scale):
                tmp = arr[swap, pr].copy()
                arr[swap, pr] = arr[swap, k]
                arr[swap, k] = tmp
        f = a[:, k + 1 :, k] / a[:, k, k][:, None]
        a[:, k + 1 :, k + 1 :] -= f[:, :, None] * a[:, k, k + 1 :][:, None, :]
        x[:, k + 1 :] -= f * x[:, k][:, None]
    for k in range(m - 1, -1, -1):
        x[:, k] = (x[:, k] - np.einsum("bj,bj->b", a[:, k, k + 1 :], x[:, k + 1 :])) / a[
            :, k, k
        ]
    return x, -1


def _laplacian_weights_batched(
    stencil_points: np.ndarray, centers: np.ndarray, basis: MonomialBasis
) -> tuple[np.ndarray, int]:
    """Weights for a (B, n, 2) batch of stencils around (B, 2) centers.

    Returns (weights (B, n), -1) or (partial, failing batch index).
    """
    nbatch, n, _ = stencil_points.shape
    q = basis.q
    loc = stencil_points - centers[:, None, :]
    radius2 = (loc**2).sum(axis=2)
    s = np.sqrt(radius2.max(axis=1))
    if np.any(s == 0):
        return np.zeros((nbatch, n)), int(np.nonzero(s == 0)[0][0])
    loc = loc / s[:, None, None]

    diff = loc[:, :, None, :] - loc[:, None, :, :]
    dist = np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)
    mono = _monomials_at(loc, basis)

    m = n + q
    sys_mat = np.zeros((nbatch, m, m))
    sys_mat[:, :n, :n] = dist**3
    sys_mat[:, :n, n:] = mono
    sys_mat[:, n:, :n] = mono.transpose(0, 2, 1)

    rhs = np.zeros((nbatch, m))
    rhs[:, :n] = phs_laplacian(np.sqrt(radius2) / s[:, None])
    origin = (0.0, 0.0)
    for j, exps in enumerate(basis.exponents):
        rhs[:, n + j] = monomial_laplacian(exps, origin)

    sol, bad = _lu_solve_batched(sys_mat, rhs)
    if bad >= 0:
        return sol[:, :n], bad
    return sol[:, :n] / (s**2)[:, None], -1


def compute_laplacian_weights(
    stencil_points: np.ndarray,
    center: np.ndarray | None = None,
    basis: MonomialBasis = CUBIC_BASIS,
) -> np.ndarray:
    """Laplacian weight vector for one stencil.

    stencil_points is (n, 2); center defaults to the first stencil point.
    Requires n >= q for unisolvency. Raises SingularSystem when the saddle
    system pivots collapse (duplicate or degenerate nodes).
    """
    pts = np.asarray(stencil_points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"stencil_points must be (n, 2), got {pts.shape}")
    n = len(pts)
    if n < basis.q:
        raise InsufficientStencil(
            f"stencil size {n} below monomial count q={basis.q}"
        )
    c = pts[0] if center is None else np.asarray(center, dtype=float)
    w, bad = _laplacian_weights_batched(pts[None, :, :], c[None, :], basis)
    if bad >= 0:
        raise SingularSystem("saddle system is singular (duplicate or degenerate nodes)")
    return w[0]


@dataclass(frozen=True)
class StencilTable:
    """Per-interior-node neighbor id lists; element 0 of each row is the owner."""

    node_ids: np.ndarray  # (B,) interior node ids, ascending
    rows: tuple[np.ndarray, ...]  # rows[i] holds the stencil of node_ids[i]

    def __post_init__(self):
        if len(self.node_ids) != len(self.rows):
            raise ValueError("node_ids and rows must align")

    def __len__(self) -> int:
        return len(self.node_ids)

    def __iter__(self) -> Iterator[tuple[int, np.ndarray]]:
        return zip(map(int, self.node_ids), self.rows)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(r) for r in self.rows])


@dataclass(frozen=True)
class WeightTable:
    """Weight vectors aligned row-for-row with a StencilTable."""

    node_ids: np.ndarray
    rows: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.node_ids) != len(self.rows):
            raise ValueError("node_ids and rows must align")

    def __len__(self) -> int:
        return len(self.node_ids)

    def __iter__(self) -> Iterator[tuple[int, np.ndarray]]:
        return zip(map(int, self.node_ids), self.rows)


def dump_weights_csv(stencils: StencilTable, weights: WeightTable) -> str:
    """Debug dump `node_id,neighbor_rank,neighbor_id,weight`."""
    lines = ["node_id,neighbor_rank,neighbor_id,weight"]
    for (nid, st), (_, w) in zip(stencils, weights):
        for rank, (j, wj) in enumerate(zip(st, w)):
            lines.append(f"{nid},{rank},{int(j)},{float(wj)!r}")
    return "\n".join(lines) + "\n"


def _normalize_sizes(nodes: NodeSet, n_per_node) -> np.ndarray:
    """Stencil size per interior node from an int, mapping, or full array."""
    interior = nodes.interior_ids
    if np.isscalar(n_per_node):
        return np.full(len(interior), int(n_per_node))
    if isinstance(n_per_node, Mapping):
        return np.array([int(n_per_node[int(i)]) for i in interior])
    arr = np.asarray(n_per_node)
    if arr.shape == (len(nodes),):
        return arr[interior].astype(int)
    if arr.shape == (len(interior),):
        return arr.astype(int)
    raise ValueError(
        f"n_per_node must be scalar, mapping, or array of length {len(nodes)} or "
        f"{len(interior)}, got shape {arr.shape}"
    )


def build_weight_table(
    nodes: NodeSet,
    index: NeighborIndex,
    n_per_node,
    basis: MonomialBasis = CUBIC_BASIS,
) -> tuple[StencilTable, WeightTable]:
    """Stencils and Laplacian weights for every interior node.

    n_per_node may be a single int, a {node_id: n} mapping, or an array.
    Boundary nodes carry Dirichlet rows downstream and get no stencil.
    Nodes sharing a stencil size are solved as one batch; the result is
    identical to per-node computation.
    """
    interior = nodes.interior_ids
    sizes = _normalize_sizes(nodes, n_per_node)
    for i, n in zip(interior, sizes):
        if n < basis.q:
            raise InsufficientStencil(
                f"stencil size {int(n)} below monomial count q={basis.q} (node {int(i)})"
            )

    stencil_rows: list[np.ndarray | None] = [None] * len(interior)
    weight_rows: list[np.ndarray | None] = [None] * len(interior)
    pos_of = {int(node): row for row, node in enumerate(interior)}

    for n in np.unique(sizes):
        group = np.nonzero(sizes == n)[0]
        ids = interior[group]
        table = k_nearest_table(index, ids, int(n))
        pts = index.points[table]
        centers = index.points[ids]
        for lo in range(0, len(group), _CHUNK):
            sl = slice(lo, lo + _CHUNK)
            w, bad = _laplacian_weights_batched(pts[sl], centers[sl], basis)
            if bad >= 0:
                node = int(ids[lo + bad])
                raise SingularSystem(
                    f"saddle system singular at node {node} "
                    "(duplicate or degenerate stencil nodes)",
                    node_id=node,
                )
            for j, row in enumerate(group[sl.start : sl.stop]):
                stencil_rows[row] = table[sl][j]
                weight_rows[row] = w[j]

    for node, row in pos_of.items():
        assert stencil_rows[row] is not None, f"node {node} missed by grouping"
    return (
        StencilTable(node_ids=interior, rows=tuple(stencil_rows)),
        WeightTable(node_ids=interior, rows=tuple(weight_rows)),
    )
