import numpy as np
import pytest
import scipy.sparse as sp

from rbffdlab.errors import (
    Breakdown,
    MissingWeights,
    NotConverged,
    SingularMatrix,
    TooLargeForDense,
)
from rbffdlab.neighbors import build_index
from rbffdlab.nodes import NodeSet
from rbffdlab.problem import SINE_PRODUCT
from rbffdlab.system import (
    LinearSystem,
    assemble,
    relative_residual,
    solve_direct_dense,
    solve_iterative,
)
from rbffdlab.weights import StencilTable, WeightTable, build_weight_table


def toy_setup():
    """4 boundary nodes and 1 interior node with a hand-made weight row."""
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]])
    nodes = NodeSet(points=pts, boundary=np.array([1, 1, 1, 1, 0], bool), h=1.0)
    ids = np.array([4])
    st = StencilTable(node_ids=ids, rows=(np.array([4, 0, 1, 2, 3]),))
    w = WeightTable(node_ids=ids, rows=(np.array([-4.0, 1.0, 1.0, 1.0, 1.0]),))
    return nodes, st, w


def identity_system(b):
    n = len(b)
    mat = sp.csr_matrix(sp.eye(n))
    return LinearSystem(matrix=mat, b=np.asarray(b, float), boundary=np.zeros(n, bool))


class TestAssemble:
    def test_toy_structure(self):
        nodes, st, w = toy_setup()
        f = lambda p: np.full(len(p), 7.0)
        g = lambda p: p[:, 0] + p[:, 1]
        system = assemble(nodes, st, w, f, g)
        dense = system.matrix.toarray()
        assert dense.shape == (5, 5)
        assert np.array_equal(dense[:4], np.eye(5)[:4])
        assert np.array_equal(dense[4], [1.0, 1.0, 1.0, 1.0, -4.0])
        assert np.array_equal(system.b[:4], [0.0, 1.0, 2.0, 1.0])
        assert system.b[4] == 7.0

    def test_nnz_count(self, coarse_nodes):
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 12)
        system = assemble(coarse_nodes, st, w, SINE_PRODUCT.f, SINE_PRODUCT.g)
        assert system.matrix.nnz == 12 * coarse_nodes.n_interior + coarse_nodes.n_boundary

    def test_constant_data_reproduced_exactly(self, coarse_nodes):
        # f = 0, g = 1: row sums vanish by constant exactness, so u = 1 solves.
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 15)
        zero = lambda p: np.zeros(len(p))
        one = lambda p: np.ones(len(p))
        system = assemble(coarse_nodes, st, w, zero, one)
        ones = np.ones(system.n)
        assert np.abs(system.matrix @ ones - system.b).max() <= 1e-9

    def test_missing_weights(self):
        nodes, st, w = toy_setup()
        empty_st = StencilTable(node_ids=np.array([], int), rows=())
        empty_w = WeightTable(node_ids=np.array([], int), rows=())
        f = g = lambda p: np.zeros(len(p))
        with pytest.raises(MissingWeights):
            assemble(nodes, empty_st, empty_w, f, g)

    def test_matrix_market_dump(self):
        nodes, st, w = toy_setup()
        f = g = lambda p: np.zeros(len(p))
        system = assemble(nodes, st, w, f, g)
        text = system.to_matrix_market()
        assert text.startswith("%%MatrixMarket matrix coordinate")


class TestSolveIterative:
    def test_identity_converges_immediately(self):
        system = identity_system([3.0, -1.0, 2.5])
        report = solve_iterative(system)
        assert report.iterations <= 1
        assert np.allclose(report.u, system.b, atol=1e-12)

    def test_diagonal_system(self):
        mat = sp.csr_matrix(sp.diags([2.0, 4.0]))
        system = LinearSystem(matrix=mat, b=np.array([2.0, 8.0]), boundary=np.zeros(2, bool))
        report = solve_iterative(system)
        assert np.allclose(report.u, [1.0, 2.0], atol=1e-10)

    def test_zero_rhs(self):
        system = identity_system([0.0, 0.0])
        report = solve_iterative(system)
        assert report.iterations == 0
        assert np.array_equal(report.u, np.zeros(2))

    def test_reported_residual_matches_recomputation(self, coarse_nodes):
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 20)
        system = assemble(coarse_nodes, st, w, SINE_PRODUCT.f, SINE_PRODUCT.g)
        report = solve_iterative(system, tol=1e-10)
        assert report.residual <= 1e-10
        assert abs(report.residual - relative_residual(system, report.u)) <= 1e-14

    def test_structurally_singular_flagged(self):
        mat = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
        system = LinearSystem(matrix=mat, b=np.array([1.0, 1.0]), boundary=np.zeros(2, bool))
        with pytest.raises((Breakdown, NotConverged)):
            solve_iterative(system, tol=1e-12, max_iter=50)

    def test_max_iter_exhaustion(self, coarse_nodes):
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 20)
        system = assemble(coarse_nodes, st, w, SINE_PRODUCT.f, SINE_PRODUCT.g)
        with pytest.raises(NotConverged) as err:
            solve_iterative(system, tol=1e-14, max_iter=2)
        assert err.value.iterations == 2
        assert err.value.residual > 0


class TestSolveDense:
    def test_two_by_two(self):
        mat = sp.csr_matrix(np.array([[2.0, 0.0], [0.0, 4.0]]))
        system = LinearSystem(matrix=mat, b=np.array([2.0, 8.0]), boundary=np.zeros(2, bool))
        report = solve_direct_dense(system)
        assert np.allclose(report.u, [1.0, 2.0], atol=1e-14)
        assert report.method == "dense_lu"

    def test_random_well_conditioned(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(50, 50)) + 10 * np.eye(50)
        system = LinearSystem(
            matrix=sp.csr_matrix(a), b=rng.normal(size=50), boundary=np.zeros(50, bool)
        )
        report = solve_direct_dense(system)
        assert report.residual <= 1e-12

    def test_size_guard(self):
        n = 3001
        system = LinearSystem(
            matrix=sp.csr_matrix(sp.eye(n)), b=np.zeros(n), boundary=np.zeros(n, bool)
        )
        with pytest.raises(TooLargeForDense):
            solve_direct_dense(system)

    def test_singular_matrix(self):
        mat = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
        system = LinearSystem(matrix=mat, b=np.array([1.0, 2.0]), boundary=np.zeros(2, bool))
        with pytest.raises(SingularMatrix):
            solve_direct_dense(system)


class TestSolverEquivalence:
    def test_poisson_h005_iterative_matches_dense(self, coarse_nodes):
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 28)
        system = assemble(coarse_nodes, st, w, SINE_PRODUCT.f, SINE_PRODUCT.g)
        it = solve_iterative(system, tol=1e-10)
        de = solve_direct_dense(system)
        assert np.abs(it.u - de.u).max() <= 1e-8

    def test_boundary_rows_satisfied(self, coarse_nodes):
        index = build_index(coarse_nodes)
        st, w = build_weight_table(coarse_nodes, index, 28)
        system = assemble(coarse_nodes, st, w, SINE_PRODUCT.f, SINE_PRODUCT.g)
        report = solve_iterative(system, tol=1e-10)
        bids = coarse_nodes.boundary_ids
        g = SINE_PRODUCT.g(coarse_nodes.points[bids])
        assert np.abs(report.u[bids] - g).max() <= 1e-8
