"""Exact k-nearest-neighbor queries over a fixed node set.

Backed by a scipy cKDTree, with one twist the raw tree does not give us:
results are fully deterministic. Candidates are re-ranked by squared
distance, and exact distance ties are broken by ascending node id, so
queries agree with a brute-force scan bit for bit on any platform.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyNodeSet, KTooLarge

# Relative slack when collecting tie candidates around the k-th distance;
# generous against the few-ulp drift between tree and recomputed distances.
_TIE_SLACK = 1e-9


class NeighborIndex:
    """Immutable spatial index over a node set; safe for concurrent queries."""

    def __init__(self, points: np.ndarray):
        pts = np.ascontiguousarray(np.asarray(points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (N, 2), got {pts.shape}")
        if len(pts) == 0:
            raise EmptyNodeSet("cannot index zero nodes")
        self._points = pts
        self._tree = cKDTree(pts)

    @property
    def n(self) -> int:
        return len(self._points)

    @property
    def points(self) -> np.ndarray:
        return self._points

    def _dist2_to(self, ids, query_point) -> np.ndarray:
        diff = self._points[ids] - query_point
        return diff[:, 0] ** 2 + diff[:, 1] ** 2


def build_index(nodes) -> NeighborIndex:
    """Index all nodes (boundary and interior) of a NodeSet or an (N, 2) array."""
    pts = nodes.points if hasattr(nodes, "points") else nodes
    return NeighborIndex(pts)


def k_nearest(index: NeighborIndex, query_node_id: int, k: int) -> np.ndarray:
    """Ids of the k nearest nodes to a node, ascending by (distance, id).

    The query node itself is element 0 at distance zero. Raises KTooLarge
    when k exceeds the node count.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > index.n:
        raise KTooLarge(f"k={k} exceeds node count {index.n}")
    p = index.points[query_node_id]
    if k == index.n:
        cand = np.arange(index.n)
    else:
        d, _ = index._tree.query(p, k=k)
        dk = float(np.atleast_1d(d)[-1])
        cand = np.asarray(index._tree.query_ball_point(p, dk * (1.0 + _TIE_SLACK)))
    d2 = index._dist2_to(cand, p)
    order = np.lexsort((cand, d2))
    return cand[order][:k]


def k_nearest_table(index: NeighborIndex, query_node_ids: np.ndarray, k: int) -> np.ndarray:
    """Batched k_nearest for many query nodes; row i serves query_node_ids[i].

    Equivalent to stacking k_nearest over the ids (tested as such), but the
    bulk of the work happens in one vectorized tree query. Rows whose k-th
    distance is tied with the (k+1)-th fall back to the exact single query.
    """
    ids = np.asarray(query_node_ids)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > index.n:
        raise KTooLarge(f"k={k} exceeds node count {index.n}")
    if len(ids) == 0:
        return np.empty((0, k), dtype=np.intp)

    if k == index.n:
        return np.stack([k_nearest(index, int(i), k) for i in ids])

    qp = index.points[ids]
    kk = min(k + 1, index.n)
    _, nb = index._tree.query(qp, k=kk)
    nb = np.atleast_2d(nb)

    diff = index.points[nb] - qp[:, None, :]
    d2 = diff[:, :, 0] ** 2 + diff[:, :, 1] ** 2
    # Sort by id first, then stable-sort by distance: yields (distance, id) order.
    by_id = np.argsort(nb, axis=1, kind="stable")
    nb = np.take_along_axis(nb, by_id, axis=1)
    d2 = np.take_along_axis(d2, by_id, axis=1)
    by_d = np.argsort(d2, axis=1, kind="stable")
    nb = np.take_along_axis(nb, by_d, axis=1)
    d2 = np.take_along_axis(d2, by_d, axis=1)

    out = nb[:, :k].astype(np.intp, copy=True)
    if kk > k:
        # Tie across the k/k+1 boundary makes membership ambiguous: resolve exactly.
        ambiguous = np.nonzero(d2[:, k - 1] >= d2[:, k] * (1.0 - _TIE_SLACK))[0]
        for row in ambiguous:
            out[row] = k_nearest(index, int(ids[row]), k)
    return out
