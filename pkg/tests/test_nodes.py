import math

import numpy as np
import pytest

from rbffdlab.errors import BoundaryTooCoarse
from rbffdlab.nodes import (
    FAR,
    NEAR_BOUNDARY,
    DiscDomain,
    Point2,
    discretize_boundary,
    fill_interior,
    generate_nodes,
    split_regions,
)

from conftest import min_pairwise_distance


class TestDiscretizeBoundary:
    def test_default_disc_h001_gives_314_nodes(self, unit_disc):
        ns = discretize_boundary(unit_disc, 0.01)
        assert len(ns) == 314  # round(pi / 0.01)
        assert ns.boundary.all()

    def test_four_nodes_at_quarter_angles(self):
        dom = DiscDomain(center=Point2(0.0, 0.0), radius=1.0)
        ns = discretize_boundary(dom, math.pi / 2)
        assert len(ns) == 4
        expected = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
        assert np.allclose(ns.points, expected, atol=1e-15)

    def test_too_coarse_raises(self):
        dom = DiscDomain(center=Point2(0.0, 0.0), radius=0.5)
        with pytest.raises(BoundaryTooCoarse):
            discretize_boundary(dom, math.pi / 2)  # count = 2

    def test_nodes_on_circle_within_tolerance(self, unit_disc):
        ns = discretize_boundary(unit_disc, 0.02)
        r = np.hypot(ns.points[:, 0] - 0.5, ns.points[:, 1] - 0.5)
        assert np.abs(r - unit_disc.radius).max() <= 1e-12 * unit_disc.radius

    def test_invalid_h_rejected(self, unit_disc):
        with pytest.raises(ValueError):
            discretize_boundary(unit_disc, -0.1)


class TestFillInterior:
    def test_count_band_and_min_distance_h005(self, unit_disc):
        # Band [160, 280] measured from brute-force-proximity reference fills.
        ns = generate_nodes(unit_disc, h=0.05, seed=0)
        assert 160 <= ns.n_interior <= 280
        assert min_pairwise_distance(ns.points) >= 0.99 * 0.05

    def test_min_distance_h002(self, unit_disc):
        ns = generate_nodes(unit_disc, h=0.02, seed=3)
        assert min_pairwise_distance(ns.points) >= 0.99 * 0.02

    def test_interior_strictly_inside(self, unit_disc):
        ns = generate_nodes(unit_disc, h=0.05, seed=1)
        pts = ns.points[~ns.boundary]
        r = np.hypot(pts[:, 0] - 0.5, pts[:, 1] - 0.5)
        assert (r < unit_disc.radius).all()

    def test_tiny_domain_yields_boundary_only(self):
        dom = DiscDomain(center=Point2(0.5, 0.5), radius=0.004)
        boundary = discretize_boundary(dom, 0.001)
        ns = fill_interior(boundary, dom, h=0.01, seed=0)
        assert ns.n_interior == 0
        assert len(ns) == len(boundary)

    def test_determinism_same_seed(self, unit_disc):
        a = generate_nodes(unit_disc, h=0.05, seed=42)
        b = generate_nodes(unit_disc, h=0.05, seed=42)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.boundary, b.boundary)
        assert a.to_csv() == b.to_csv()

    def test_different_seed_differs(self, unit_disc):
        a = generate_nodes(unit_disc, h=0.05, seed=0)
        b = generate_nodes(unit_disc, h=0.05, seed=1)
        assert not np.array_equal(a.points, b.points)

    def test_count_scales_inverse_h_squared(self, unit_disc):
        coarse = generate_nodes(unit_disc, h=0.04, seed=0)
        fine = generate_nodes(unit_disc, h=0.02, seed=0)
        ratio = fine.n_interior / coarse.n_interior
        assert 4 * 0.85 <= ratio <= 4 * 1.15

    def test_boundary_first_in_sequence(self, unit_disc):
        ns = generate_nodes(unit_disc, h=0.05, seed=0)
        nb = ns.n_boundary
        assert ns.boundary[:nb].all()
        assert not ns.boundary[nb:].any()


class TestSplitRegions:
    def test_near_boundary_beyond_r_split(self, unit_disc):
        pts = np.array([[0.5 + 0.45, 0.5], [0.5, 0.5], [0.5 + 0.4, 0.5]])
        from rbffdlab.nodes import NodeSet

        ns = NodeSet(points=pts, boundary=np.zeros(3, bool), h=0.05)
        labels = split_regions(ns, unit_disc, r_split=0.4)
        assert labels[0] == NEAR_BOUNDARY  # distance 0.45 > 0.4
        assert labels[1] == FAR  # center
        assert labels[2] == FAR  # exactly 0.4: strict inequality

    def test_r_split_bounds_checked(self, unit_disc, coarse_nodes):
        with pytest.raises(ValueError):
            split_regions(coarse_nodes, unit_disc, r_split=0.6)
        with pytest.raises(ValueError):
            split_regions(coarse_nodes, unit_disc, r_split=0.0)


class TestNodeSetCsv:
    def test_schema_and_flags(self, coarse_nodes):
        lines = coarse_nodes.to_csv().strip().split("\n")
        assert lines[0] == "x,y,boundary"
        assert len(lines) == len(coarse_nodes) + 1
        first = lines[1].split(",")
        assert first[2] == "1"
        assert lines[-1].split(",")[2] == "0"

    def test_csv_round_trips_floats(self, coarse_nodes):
        lines = coarse_nodes.to_csv().strip().split("\n")[1:]
        parsed = np.array([[float(v) for v in ln.split(",")[:2]] for ln in lines])
        assert np.array_equal(parsed, coarse_nodes.points)
