"""Meshless RBF-FD Poisson solver and stencil-size experiment harness."""

__version__ = "0.1.0"

from .errors import RbffdError
from .metrics import (
    ErrorReport,
    aggregate,
    delta_n,
    detect_local_extrema,
    signed_laplacian_error,
    signed_solution_error,
)
from .neighbors import NeighborIndex, build_index, k_nearest
from .nodes import (
    DiscDomain,
    NodeSet,
    Point2,
    discretize_boundary,
    fill_interior,
    generate_nodes,
    split_regions,
)
from .problem import SINE_PRODUCT, PoissonProblem
from .schemas import ExperimentConfig
from .system import LinearSystem, SolveReport, assemble, solve_direct_dense, solve_iterative
from .weights import (
    CUBIC_BASIS,
    MonomialBasis,
    StencilTable,
    WeightTable,
    build_weight_table,
    compute_laplacian_weights,
    monomial_laplacian,
    phs_laplacian,
)

__all__ = [
    "__version__",
    "RbffdError",
    "ErrorReport",
    "aggregate",
    "delta_n",
    "detect_local_extrema",
    "signed_laplacian_error",
    "signed_solution_error",
    "NeighborIndex",
    "build_index",
    "k_nearest",
    "DiscDomain",
    "NodeSet",
    "Point2",
    "discretize_boundary",
    "fill_interior",
    "generate_nodes",
    "split_regions",
    "SINE_PRODUCT",
    "PoissonProblem",
    "ExperimentConfig",
    "LinearSystem",
    "SolveReport",
    "assemble",
    "solve_direct_dense",
    "solve_iterative",
    "CUBIC_BASIS",
    "MonomialBasis",
    "StencilTable",
    "WeightTable",
    "build_weight_table",
    "compute_laplacian_weights",
    "monomial_laplacian",
    "phs_laplacian",
]
