import numpy as np
import pytest

from rbffdlab.nodes import DiscDomain, Point2, generate_nodes


def brute_force_knn(points: np.ndarray, query_id: int, k: int) -> np.ndarray:
    """O(N) scan oracle: k ids by ascending (squared distance, id)."""
    diff = points - points[query_id]
    d2 = diff[:, 0] ** 2 + diff[:, 1] ** 2
    order = np.lexsort((np.arange(len(points)), d2))
    return order[:k]


def min_pairwise_distance(points: np.ndarray) -> float:
    """O(N^2) oracle for the closest pair distance."""
    best = np.inf
    for i in range(1, len(points)):
        diff = points[:i] - points[i]
        d2 = (diff[:, 0] ** 2 + diff[:, 1] ** 2).min()
        best = min(best, d2)
    return float(np.sqrt(best))


def random_stencil(rng: np.random.Generator, n: int, spread: float = 1.0) -> np.ndarray:
    """Random stencil with the center as its own first point, kNN-style."""
    pts = rng.uniform(-spread, spread, size=(n, 2))
    pts[0] = 0.0
    return pts


@pytest.fixture(scope="session")
def unit_disc() -> DiscDomain:
    return DiscDomain(center=Point2(0.5, 0.5), radius=0.5)


@pytest.fixture(scope="session")
def coarse_nodes(unit_disc):
    """h=0.05 disc shared by solver and metric tests."""
    return generate_nodes(unit_disc, h=0.05, seed=0)
