"""The Poisson test problem with a known analytic solution.

    lap u = f  on the disc,  u = g  on its boundary,

with u(x, y) = sin(pi x) sin(pi y), f = -2 pi^2 sin(pi x) sin(pi y), and g
the restriction of u to the boundary circle. Having u in closed form is what
makes the signed error fields computable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

FieldFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PoissonProblem:
    """Forcing, Dirichlet data, and the analytic solution they derive from."""

    u: FieldFn
    f: FieldFn
    name: str = "poisson"

    @property
    def g(self) -> FieldFn:
        # Dirichlet data is the restriction of the analytic solution.
        return self.u


def _u_sine(points: np.ndarray) -> np.ndarray:
    return np.sin(np.pi * points[..., 0]) * np.sin(np.pi * points[..., 1])


def _f_sine(points: np.ndarray) -> np.ndarray:
    return -2.0 * np.pi**2 * _u_sine(points)


#: Default problem of the whole experiment suite.
SINE_PRODUCT = PoissonProblem(u=_u_sine, f=_f_sine, name="sine_product")
