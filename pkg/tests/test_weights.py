import numpy as np
import pytest
from scipy.spatial.distance import cdist

from rbffdlab.errors import InsufficientStencil, SingularSystem
from rbffdlab.neighbors import build_index
from rbffdlab.nodes import generate_nodes
from rbffdlab.weights import (
    CUBIC_BASIS,
    MonomialBasis,
    build_weight_table,
    compute_laplacian_weights,
    dump_weights_csv,
    monomial_laplacian,
    phs_laplacian,
)

from conftest import random_stencil


def oracle_weights(stencil: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Independently coded dense solve of the saddle system (LAPACK-backed).

    Same shift-and-scale convention, but assembled with cdist and explicit
    loops and solved by numpy rather than the package's own factorization.
    """
    n = len(stencil)
    exps = CUBIC_BASIS.exponents
    q = len(exps)
    loc = (stencil - center)
    s = np.linalg.norm(loc, axis=1).max()
    loc = loc / s
    a = cdist(loc, loc) ** 3
    p = np.empty((n, q))
    for j, (ea, eb) in enumerate(exps):
        p[:, j] = loc[:, 0] ** ea * loc[:, 1] ** eb
    m = np.zeros((n + q, n + q))
    m[:n, :n] = a
    m[:n, n:] = p
    m[n:, :n] = p.T
    rhs = np.zeros(n + q)
    rhs[:n] = 9.0 * np.linalg.norm(loc, axis=1)
    for j, (ea, eb) in enumerate(exps):
        if ea == 2 and eb == 0 or ea == 0 and eb == 2:
            rhs[n + j] = 2.0
    return np.linalg.solve(m, rhs)[:n] / s**2


def exactness_residuals(stencil, center, w):
    """max |sum_j w_j p(x_j) - lap p(center)| over the augmentation monomials."""
    worst = 0.0
    for exps in CUBIC_BASIS.exponents:
        ea, eb = exps
        vals = stencil[:, 0] ** ea * stencil[:, 1] ** eb
        target = monomial_laplacian(exps, center)
        worst = max(worst, abs(w @ vals - target))
    return worst


class TestBasics:
    def test_phs_laplacian_values(self):
        assert phs_laplacian(0.0) == 0.0
        assert phs_laplacian(1.0) == 9.0
        assert phs_laplacian(2.0) == 18.0

    def test_monomial_laplacian_values(self):
        assert monomial_laplacian((2, 0), (0.0, 0.0)) == 2.0
        assert monomial_laplacian((1, 1), (3.7, -2.1)) == 0.0
        assert monomial_laplacian((3, 0), (1.0, 0.0)) == 6.0
        assert monomial_laplacian((0, 2), (5.0, 5.0)) == 2.0

    def test_basis_is_graded_lex(self):
        assert CUBIC_BASIS.q == 10
        assert CUBIC_BASIS.exponents == (
            (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
            (3, 0), (2, 1), (1, 2), (0, 3),
        )
        assert MonomialBasis(2).q == 6


class TestComputeWeights:
    def test_polynomial_exactness_random_stencils(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            st = random_stencil(rng, 28)
            center = st[0]
            w = compute_laplacian_weights(st, center)
            tol = 1e-8 * np.abs(w).max()
            assert exactness_residuals(st, center, w) <= tol

    def test_weights_sum_to_zero(self):
        rng = np.random.default_rng(5)
        st = random_stencil(rng, 30)
        w = compute_laplacian_weights(st, st[0])
        assert abs(w.sum()) <= 1e-9 * np.abs(w).max()

    def test_matches_independent_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            st = random_stencil(rng, 28)
            w = compute_laplacian_weights(st, st[0])
            w_ref = oracle_weights(st, st[0])
            assert np.abs(w - w_ref).max() <= 1e-10 * np.abs(w_ref).max()

    def test_scaling_law(self):
        rng = np.random.default_rng(2)
        st = random_stencil(rng, 25)
        w1 = compute_laplacian_weights(st, st[0])
        c = 3.5
        w2 = compute_laplacian_weights(c * st, c * st[0])
        assert np.abs(w2 - w1 / c**2).max() <= 1e-10 * np.abs(w1 / c**2).max()

    def test_translation_invariance(self):
        rng = np.random.default_rng(3)
        st = random_stencil(rng, 25)
        shift = np.array([12.3, -45.6])
        w1 = compute_laplacian_weights(st, st[0])
        w2 = compute_laplacian_weights(st + shift, st[0] + shift)
        assert np.abs(w2 - w1).max() <= 1e-10 * np.abs(w1).max()

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(4)
        st = random_stencil(rng, 25)
        theta = 0.7
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        w1 = compute_laplacian_weights(st, st[0])
        w2 = compute_laplacian_weights(st @ rot.T, rot @ st[0])
        assert np.abs(w2 - w1).max() <= 1e-8 * np.abs(w1).max()

    def test_minimum_unisolvent_size(self):
        rng = np.random.default_rng(6)
        st = random_stencil(rng, 10)
        w = compute_laplacian_weights(st, st[0])
        assert exactness_residuals(st, st[0], w) <= 1e-8 * np.abs(w).max()

    def test_insufficient_stencil(self):
        rng = np.random.default_rng(7)
        with pytest.raises(InsufficientStencil):
            compute_laplacian_weights(random_stencil(rng, 9))

    def test_duplicate_node_raises_singular(self):
        rng = np.random.default_rng(8)
        st = random_stencil(rng, 20)
        st[7] = st[3]
        with pytest.raises(SingularSystem):
            compute_laplacian_weights(st, st[0])

    def test_collinear_stencil_raises_singular(self):
        t = np.linspace(0.0, 1.0, 15)
        st = np.stack([t, 2.0 * t], axis=1)  # all on a line: monomials degenerate
        with pytest.raises(SingularSystem):
            compute_laplacian_weights(st, st[0])


@pytest.fixture(scope="module")
def table(unit_disc):
    nodes = generate_nodes(unit_disc, h=0.08, seed=0)
    index = build_index(nodes)
    stencils, weights = build_weight_table(nodes, index, 15)
    return nodes, stencils, weights


class TestWeightTable:
    def test_covers_interior_only(self, table):
        nodes, stencils, weights = table
        assert np.array_equal(stencils.node_ids, nodes.interior_ids)
        assert np.array_equal(weights.node_ids, nodes.interior_ids)

    def test_rows_start_at_owner(self, table):
        _, stencils, _ = table
        for nid, row in stencils:
            assert row[0] == nid
            assert len(row) == 15

    def test_rows_sum_to_zero(self, table):
        _, _, weights = table
        for _, w in weights:
            assert abs(w.sum()) <= 1e-9 * np.abs(w).max()

    def test_matches_single_stencil_api(self, table):
        nodes, stencils, weights = table
        for (nid, st), (_, w) in list(zip(stencils, weights))[::25]:
            w_single = compute_laplacian_weights(nodes.points[st], nodes.points[nid])
            assert np.abs(w - w_single).max() <= 1e-12 * np.abs(w).max()

    def test_per_region_sizes(self, unit_disc):
        from rbffdlab.nodes import NEAR_BOUNDARY, split_regions

        nodes = generate_nodes(unit_disc, h=0.08, seed=0)
        index = build_index(nodes)
        labels = split_regions(nodes, unit_disc, 0.4)
        sizes = np.where(labels == NEAR_BOUNDARY, 28, 14)
        stencils, _ = build_weight_table(nodes, index, sizes)
        for nid, row in stencils:
            expected = 28 if labels[nid] == NEAR_BOUNDARY else 14
            assert len(row) == expected

    def test_mapping_input(self, unit_disc):
        nodes = generate_nodes(unit_disc, h=0.1, seed=0)
        index = build_index(nodes)
        mapping = {int(i): 12 for i in nodes.interior_ids}
        stencils, _ = build_weight_table(nodes, index, mapping)
        assert all(len(r) == 12 for _, r in stencils)

    def test_insufficient_size_tagged_with_node(self, unit_disc):
        nodes = generate_nodes(unit_disc, h=0.1, seed=0)
        index = build_index(nodes)
        with pytest.raises(InsufficientStencil):
            build_weight_table(nodes, index, 9)

    def test_csv_dump_schema(self, table):
        _, stencils, weights = table
        lines = dump_weights_csv(stencils, weights).strip().split("\n")
        assert lines[0] == "node_id,neighbor_rank,neighbor_id,weight"
        assert len(lines) == 1 + sum(len(r) for _, r in stencils)
