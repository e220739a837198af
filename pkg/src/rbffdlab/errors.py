"""Exception types raised by the rbffdlab package."""


class RbffdError(Exception):
    """Base class for all package-specific errors."""


# --- node generation ---------------------------------------------------------

class BoundaryTooCoarse(RbffdError):
    """Spacing h is too large to place at least 3 nodes on the boundary circle."""


# --- neighbor search ---------------------------------------------------------

class EmptyNodeSet(RbffdError):
    """An index or metric was requested over zero nodes."""


class KTooLarge(RbffdError):
    """More neighbors requested than nodes available."""


# --- stencil weights ---------------------------------------------------------

class InsufficientStencil(RbffdError):
    """Stencil smaller than the monomial basis; the saddle system is underdetermined."""


class SingularSystem(RbffdError):
    """Near-zero pivot in the local saddle system (duplicate or degenerate nodes)."""

    def __init__(self, message: str, node_id: int | None = None):
        super().__init__(message)
        self.node_id = node_id


# --- global linear system ----------------------------------------------------

class MissingWeights(RbffdError):
    """An interior node has no weight vector during assembly."""

    def __init__(self, node_id: int):
        super().__init__(f"no weights for interior node {node_id}")
        self.node_id = node_id


class NotConverged(RbffdError):
    """Iterative solver exhausted max_iter above tolerance."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"no convergence after {iterations} iterations (relative residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class Breakdown(RbffdError):
    """Zero inner-product pivot inside the iterative solver."""


class TooLargeForDense(RbffdError):
    """System exceeds the dense-solver size guard."""


class SingularMatrix(RbffdError):
    """Dense factorization hit an exactly singular matrix."""


# --- metrics and experiment harness ------------------------------------------

class EmptyInterior(RbffdError):
    """A metric over interior nodes was requested with none present."""


class TooShort(RbffdError):
    """Extrema detection needs at least 3 samples."""


class TooFewPoints(RbffdError):
    """A convergence fit needs at least 3 spacing values."""
