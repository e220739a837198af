"""Scattered-node discretization of a disc: boundary ring plus advancing-front fill.

The boundary circle is sampled first at (near-)uniform spacing h. The interior
is then filled by an advancing-front Poisson-disc process: every placed node is
queued; when a node is processed, candidate points are drawn uniformly on the
circle of radius h around it and accepted when they fall strictly inside the
domain and keep distance >= h to every node placed so far. Acceptance order is
the node order, which makes the whole construction a pure function of
(domain, h, seed, k_candidates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BoundaryTooCoarse

NEAR_BOUNDARY = "near_boundary"
FAR = "far"


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class DiscDomain:
    """Closed disc ``|x - center| <= radius``."""

    center: Point2 = Point2(0.5, 0.5)
    radius: float = 0.5

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        object.__setattr__(self, "center", Point2(*self.center))

    def contains_strict(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of points strictly inside the disc."""
        d2 = (points[..., 0] - self.center.x) ** 2 + (points[..., 1] - self.center.y) ** 2
        return d2 < self.radius**2


@dataclass(frozen=True)
class NodeSet:
    """Ordered scattered nodes with boundary flags and generation metadata.

    Boundary nodes always come first in the sequence; interior nodes follow in
    the order the fill accepted them. Arrays are read-only so a NodeSet can be
    shared across threads.
    """

    points: np.ndarray  # (N, 2) float64
    boundary: np.ndarray  # (N,) bool
    h: float
    seed: int = 0

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        flags = np.asarray(self.boundary, dtype=bool)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (N, 2), got {pts.shape}")
        if flags.shape != (len(pts),):
            raise ValueError("boundary flags must align with points")
        pts.setflags(write=False)
        flags.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "boundary", flags)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n_boundary(self) -> int:
        return int(np.count_nonzero(self.boundary))

    @property
    def n_interior(self) -> int:
        return len(self) - self.n_boundary

    @property
    def interior_ids(self) -> np.ndarray:
        return np.nonzero(~self.boundary)[0]

    @property
    def boundary_ids(self) -> np.ndarray:
        return np.nonzero(self.boundary)[0]

    def to_csv(self) -> str:
        """Render the `x,y,boundary` CSV (schema of nodes.csv)."""
        lines = ["x,y,boundary"]
        for (x, y), flag in zip(self.points, self.boundary):
            lines.append(f"{float(x)!r},{float(y)!r},{1 if flag else 0}")
        return "\n".join(lines) + "\n"


def discretize_boundary(domain: DiscDomain, h: float) -> NodeSet:
    """Place round(2*pi*r/h) equally spaced nodes on the domain circle, phase 0.

    Raises BoundaryTooCoarse when fewer than 3 nodes would fit.
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    count = round(2 * math.pi * domain.radius / h)
    if count < 3:
        raise BoundaryTooCoarse(
            f"h={h} yields only {count} boundary nodes on radius {domain.radius}"
        )
    ang = 2 * math.pi * np.arange(count) / count
    pts = np.stack(
        [
            domain.center.x + domain.radius * np.cos(ang),
            domain.center.y + domain.radius * np.sin(ang),
        ],
        axis=1,
    )
    return NodeSet(points=pts, boundary=np.ones(count, dtype=bool), h=h, seed=0)


def fill_interior(
    boundary: NodeSet,
    domain: DiscDomain,
    h: float,
    seed: int = 0,
    k_candidates: int = 15,
) -> NodeSet:
    """Advancing-front Poisson-disc fill of the disc interior.

    All boundary nodes are queued up front; each processed node spawns
    k_candidates points uniformly at random on its radius-h circle, and a
    candidate is accepted iff it lies strictly inside the domain and no
    existing node is closer than h. Accepted candidates are appended and
    queued, so the output sequence is deterministic for a given seed.

    An interior that admits no candidate (tiny domain) is not an error; the
    boundary-only set is returned.
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    if k_candidates < 1:
        raise ValueError(f"k_candidates must be >= 1, got {k_candidates}")

    rng = np.random.default_rng(seed)
    cx, cy = domain.center
    r2 = domain.radius**2
    h2 = h * h

    xs = list(map(float, boundary.points[:, 0]))
    ys = list(map(float, boundary.points[:, 1]))

    # Background grid of cell size h: nodes closer than h to a candidate can
    # only live in the 3x3 cell block around it.
    grid: dict[tuple[int, int], list[int]] = {}
    for i in range(len(xs)):
        key = (math.floor(xs[i] / h), math.floor(ys[i] / h))
        grid.setdefault(key, []).append(i)

    two_pi = 2 * math.pi
    head = 0
    while head < len(xs):
        px, py = xs[head], ys[head]
        head += 1
        for t in rng.random(k_candidates):
            a = two_pi * t
            qx = px + h * math.cos(a)
            qy = py + h * math.sin(a)
            if (qx - cx) ** 2 + (qy - cy) ** 2 >= r2:
                continue
            ci = math.floor(qx / h)
            cj = math.floor(qy / h)
            free = True
            for ii in range(ci - 1, ci + 2):
                for jj in range(cj - 1, cj + 2):
                    for m in grid.get((ii, jj), ()):
                        dx = qx - xs[m]
                        dy = qy - ys[m]
                        if dx * dx + dy * dy < h2:
                            free = False
                            break
                    if not free:
                        break
                if not free:
                    break
            if free:
                idx = len(xs)
                xs.append(qx)
                ys.append(qy)
                grid.setdefault((ci, cj), []).append(idx)

    pts = np.stack([np.asarray(xs), np.asarray(ys)], axis=1)
    flags = np.zeros(len(pts), dtype=bool)
    flags[: len(boundary)] = True
    return NodeSet(points=pts, boundary=flags, h=h, seed=seed)


def generate_nodes(
    domain: DiscDomain, h: float, seed: int = 0, k_candidates: int = 15
) -> NodeSet:
    """Boundary ring followed by interior fill; the standard full discretization."""
    return fill_interior(discretize_boundary(domain, h), domain, h, seed, k_candidates)


def split_regions(nodes: NodeSet, domain: DiscDomain, r_split: float) -> np.ndarray:
    """Label each node `near_boundary` when |x - center| > r_split, else `far`.

    The inequality is strict: a node at exactly r_split counts as far.
    """
    if not (0 < r_split < domain.radius):
        raise ValueError(f"r_split must lie in (0, {domain.radius}), got {r_split}")
    d2 = (nodes.points[:, 0] - domain.center.x) ** 2 + (
        nodes.points[:, 1] - domain.center.y
    ) ** 2
    return np.where(d2 > r_split**2, NEAR_BOUNDARY, FAR)
