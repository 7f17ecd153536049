"""Uniform grid, ghost-point elimination, and the coupled spatial operator.

The boundary conditions tie the two endpoints of the interval together
("fourth-type" conditions): with A = 1 - theta,

    A * (trace at x=1) = (trace at x=0)
    (derivative at x=1) = A * (derivative at x=0)

Discretely, traces are approximated by neighbor averages across each
endpoint and derivatives by centered differences through synthetic ghost
nodes at x = -dx and x = 1 + dx.  Solving the resulting 2x2 system gives the
ghost values in terms of the interior nodes u_1 and u_{N-1}; substituting
them into the boundary-row stencils turns the operator into an
(N+1) x (N+1) matrix that is tridiagonal except for one extra entry in each
of rows 0 and N (columns N-1 and 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "GhostPair",
    "OperatorCoefficients",
    "ghost_values",
    "operator_coefficients",
    "spatial_operator",
    "apply_operator",
    "spatial_average",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform mesh of the unit interval with n intervals, n+1 nodes."""

    n: int = 32

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"need n >= 4 so boundary stencils never overlap, got {self.n}")

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)


@dataclass(frozen=True)
class GhostPair:
    """Eliminated ghost values outside both endpoints."""

    u_right_ghost: float   # value at x = 1 + dx
    u_left_ghost: float    # value at x = -dx


def ghost_values(theta: float, u1: float, u_nm1: float) -> GhostPair:
    """Solve the discrete boundary relations for the two ghost values.

    With A = 1 - theta and D = 1 + A^2:

        u_{N+1} = ((1 - A^2) u_{N-1} + 2A u_1) / D
        u_{-1}  = (2A u_{N-1} + (-1 + A^2) u_1) / D

    theta = 0 reduces to the periodic wrap, theta = 1 to a Neumann mirror on
    the right and Dirichlet antisymmetry on the left.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    a = 1.0 - theta
    d = 1.0 + a * a
    u_right = ((1.0 - a * a) * u_nm1 + 2.0 * a * u1) / d
    u_left = (2.0 * a * u_nm1 + (-1.0 + a * a) * u1) / d
    return GhostPair(u_right, u_left)


@dataclass(frozen=True)
class OperatorCoefficients:
    """Compact form of the spatial operator: constant stencil bands plus the
    four boundary-row couplings produced by ghost elimination."""

    n: int
    lo: float       # interior coefficient of u_{j-1}
    di: float       # interior coefficient of u_j
    up: float       # interior coefficient of u_{j+1}
    row0_c1: float  # row 0, column 1
    row0_cm: float  # row 0, column N-1
    rown_cm: float  # row N, column N-1
    rown_c1: float  # row N, column 1


def operator_coefficients(grid: GridSpec, nu: float, c: float,
                          theta: float) -> OperatorCoefficients:
    """Stencil coefficients for nu * d2/dx2 - c * d/dx with ghost elimination.

    Applies (L u)_j = nu (u_{j+1} - 2u_j + u_{j-1})/dx^2
                      - c (u_{j+1} - u_{j-1})/(2 dx)
    at every node j = 0..N, boundary rows included, with the ghost values
    substituted from their elimination formula.
    """
    if nu <= 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    dx = grid.dx
    lo = nu / dx**2 + c / (2.0 * dx)   # multiplies u_{j-1}
    di = -2.0 * nu / dx**2
    up = nu / dx**2 - c / (2.0 * dx)   # multiplies u_{j+1}
    a = 1.0 - theta
    d = 1.0 + a * a
    # row 0: u_{-1} -> (2A u_{N-1} + (A^2 - 1) u_1) / D
    row0_c1 = up + lo * (a * a - 1.0) / d
    row0_cm = lo * 2.0 * a / d
    # row N: u_{N+1} -> ((1 - A^2) u_{N-1} + 2A u_1) / D
    rown_cm = lo + up * (1.0 - a * a) / d
    rown_c1 = up * 2.0 * a / d
    return OperatorCoefficients(grid.n, lo, di, up,
                                row0_c1, row0_cm, rown_cm, rown_c1)


def spatial_operator(grid: GridSpec, nu: float, c: float,
                     theta: float) -> np.ndarray:
    """Dense (N+1) x (N+1) matrix of the eliminated spatial operator."""
    co = operator_coefficients(grid, nu, c, theta)
    m = grid.n + 1
    mat = np.zeros((m, m))
    for j in range(1, m - 1):
        mat[j, j - 1] = co.lo
        mat[j, j] = co.di
        mat[j, j + 1] = co.up
    mat[0, 0] = co.di
    mat[0, 1] = co.row0_c1
    mat[0, m - 2] += co.row0_cm
    mat[m - 1, m - 1] = co.di
    mat[m - 1, m - 2] = co.rown_cm
    mat[m - 1, 1] += co.rown_c1
    return mat


def apply_operator(co: OperatorCoefficients, u: np.ndarray) -> np.ndarray:
    """Matrix-vector product L u in the compact representation."""
    if u.shape != (co.n + 1,):
        raise ValueError(f"expected vector of length {co.n + 1}, got {u.shape}")
    out = np.empty_like(u)
    out[1:-1] = co.lo * u[:-2] + co.di * u[1:-1] + co.up * u[2:]
    out[0] = co.di * u[0] + co.row0_c1 * u[1] + co.row0_cm * u[-2]
    out[-1] = co.di * u[-1] + co.rown_cm * u[-2] + co.rown_c1 * u[1]
    return out


def spatial_average(grid: GridSpec, u: np.ndarray) -> float:
    """Trapezoid-rule average of a node vector over the unit interval."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n + 1,):
        raise ValueError(f"expected vector of length {grid.n + 1}, got {u.shape}")
    return grid.dx * (0.5 * u[0] + u[1:-1].sum() + 0.5 * u[-1])
