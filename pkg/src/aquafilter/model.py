"""Dimensionless aquarium-filtration model: parameters, filtration law, reactions.

The model tracks two fields on the unit interval, dust density ``v1`` and
predator (microbe) density ``v2``, plus two scalars living on the filter
boundary: accumulated dust ``sigma1`` and filter-dwelling predators
``sigma2``.  The filtration function F(s) = 1/(1 + beta*s) controls both the
absorption rate at the boundary and the pump-driven flow speed
c = omega * F, so a loaded filter simultaneously filters less and slows the
flow (clogging).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ModelParams",
    "DimensionalParams",
    "State",
    "filter_function",
    "f_tilde_of_sigma1",
    "velocity",
    "reaction_v1",
    "reaction_v2",
    "boundary_rhs",
    "derive_dimensionless",
    "default_initial",
    "DEFAULT_INITIAL",
]

# Scalar fallbacks for explicitly uniform initial data: clean tank and
# filter, unit predator seed.  Strictly zero data is degenerate: both
# predator equations are homogeneous in the predator variables, so
# v2 = sigma2 = 0 persists forever and every feeding rate accumulates dust
# without bound.  A seed of any positive size reaches the same long-time
# behavior.
DEFAULT_INITIAL = {"v1": 0.0, "v2": 1.0, "sigma1": 0.1, "sigma2": 1.0}


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless coefficients of the coupled system.

    ``b_scale`` is the dimensional filter scale B entering the effective
    filtration law F~(sigma1) = F(B * sigma1); the default table keeps B = 1
    but it stays explicit so the nondimensionalization round-trip can be
    exercised.
    """

    nu1: float = 0.1        # diffusivity of v1
    nu2: float = 0.1        # diffusivity of v2
    r1_tilde: float = 0.5   # dust consumption rate
    r2: float = 0.5         # predator growth rate
    s1_tilde: float = 1.0   # boundary dust consumption rate
    s2: float = 1.0         # boundary predator growth rate
    q1: float = 1.0         # boundary influx coefficient for sigma1
    q2: float = 1.0         # boundary influx coefficient for sigma2
    omega: float = 0.1      # flow-speed constant
    beta: float = 2.0       # filter capacity constant
    b_scale: float = 1.0    # scale B in F~(sigma1) = F(B*sigma1)
    f_tilde: float = 1.0    # constant feeding rate

    def __post_init__(self):
        for name in ("nu1", "nu2", "b_scale"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        for name in ("r1_tilde", "r2", "s1_tilde", "s2", "q1", "q2",
                     "omega", "beta", "f_tilde"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class DimensionalParams:
    """Dimensional rates plus the carrying-capacity scales A, B, C_u, C_rho."""

    nu1: float = 0.1
    nu2: float = 0.1
    r1: float = 0.5         # dimensional dust consumption rate
    r2: float = 0.5
    s1: float = 1.0         # dimensional boundary consumption rate
    s2: float = 1.0
    omega: float = 0.1
    beta: float = 2.0
    f: float = 1.0          # dimensional feeding rate
    a_scale: float = 1.0    # A
    b_scale: float = 1.0    # B
    cu_scale: float = 1.0   # C_u
    crho_scale: float = 1.0  # C_rho

    def __post_init__(self):
        for name in ("a_scale", "b_scale", "cu_scale", "crho_scale"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        for name in ("nu1", "nu2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        for name in ("r1", "r2", "s1", "s2", "omega", "beta", "f"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass
class State:
    """Full discrete unknown: node vectors v1, v2 plus the boundary scalars."""

    v1: np.ndarray
    v2: np.ndarray
    sigma1: float
    sigma2: float
    t: float = 0.0

    def __post_init__(self):
        self.v1 = np.asarray(self.v1, dtype=float)
        self.v2 = np.asarray(self.v2, dtype=float)
        if self.v1.shape != self.v2.shape or self.v1.ndim != 1:
            raise ValueError(
                f"v1 and v2 must be 1-d vectors of equal length, "
                f"got {self.v1.shape} and {self.v2.shape}")
        if not (np.all(np.isfinite(self.v1)) and np.all(np.isfinite(self.v2))):
            raise ValueError("non-finite entries in state vectors")
        for name in ("sigma1", "sigma2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")

    @classmethod
    def uniform(cls, n: int, v1=0.0, v2=0.0, sigma1=0.0, sigma2=0.0, t=0.0):
        """Constant initial data on a grid with n intervals (n+1 nodes)."""
        return cls(np.full(n + 1, float(v1)), np.full(n + 1, float(v2)),
                   float(sigma1), float(sigma2), float(t))

    def copy(self):
        return State(self.v1.copy(), self.v2.copy(),
                     self.sigma1, self.sigma2, self.t)


def filter_function(beta, s):
    """Filtration efficiency F(s) = 1/(1 + beta*s), in (0, 1].

    Equals 1 for a clean filter (s = 0), decreases toward 0 as the load s
    grows; beta sets how fast the efficiency deteriorates.
    """
    if np.any(np.asarray(beta) < 0):
        raise ValueError(f"beta must be >= 0, got {beta}")
    if np.any(np.asarray(s) < 0):
        raise ValueError(f"filter load must be >= 0, got {s}")
    return 1.0 / (1.0 + beta * s)


def f_tilde_of_sigma1(p: ModelParams, sigma1):
    """Effective filtration efficiency F~(sigma1) = F(B * sigma1)."""
    return filter_function(p.beta, p.b_scale * sigma1)


def velocity(p: ModelParams, sigma1):
    """Flow speed c = omega * F~(sigma1); maximal at a clean filter."""
    return p.omega * f_tilde_of_sigma1(p, sigma1)


def reaction_v1(p: ModelParams, v1, v2):
    """Interior dust reaction: predation loss plus constant feeding.

    Returns -r1_tilde * v1 * v2 / (1 + v1) + f_tilde.
    """
    if np.any(np.asarray(v1) == -1.0):
        raise ValueError("reaction_v1 pole at v1 = -1")
    return -p.r1_tilde * v1 * v2 / (1.0 + v1) + p.f_tilde


def reaction_v2(p: ModelParams, v1, v2):
    """Interior predator reaction: saturated growth capped by -v2^2.

    Returns (r2 * v1 / (1 + v1) - v2) * v2.
    """
    if np.any(np.asarray(v1) == -1.0):
        raise ValueError("reaction_v2 pole at v1 = -1")
    return (p.r2 * v1 / (1.0 + v1) - v2) * v2


def boundary_rhs(p: ModelParams, sigma1, sigma2, trace_v1, trace_v2):
    """Right-hand sides of the two boundary ODEs.

    The influx terms carry the quadratic factor c * F~ = omega * F~^2: the
    flow delivers material at speed c and the filter absorbs the fraction F~.
    ``trace_v1`` / ``trace_v2`` are the field values at the intake boundary
    x = 1.
    """
    if sigma1 < 0 or sigma2 < 0:
        raise ValueError(
            f"filter loads must be >= 0, got sigma1={sigma1}, sigma2={sigma2}")
    ft = f_tilde_of_sigma1(p, sigma1)
    influx = p.omega * ft * ft
    dsigma1 = -p.s1_tilde * sigma1 * sigma2 / (1.0 + sigma1) \
        + p.q1 * influx * trace_v1
    dsigma2 = (p.s2 * sigma1 / (1.0 + sigma1) - sigma2) * sigma2 \
        + p.q2 * influx * trace_v2
    return dsigma1, dsigma2


def derive_dimensionless(dp: DimensionalParams) -> ModelParams:
    """Map dimensional parameters to the dimensionless set.

    Applies r1_tilde = r1*C_u/A, s1_tilde = s1*C_rho/B, q1 = A/B,
    q2 = C_u/C_rho, f_tilde = f/A; the remaining coefficients carry over.
    """
    return ModelParams(
        nu1=dp.nu1,
        nu2=dp.nu2,
        r1_tilde=dp.r1 * dp.cu_scale / dp.a_scale,
        r2=dp.r2,
        s1_tilde=dp.s1 * dp.crho_scale / dp.b_scale,
        s2=dp.s2,
        q1=dp.a_scale / dp.b_scale,
        q2=dp.cu_scale / dp.crho_scale,
        omega=dp.omega,
        beta=dp.beta,
        b_scale=dp.b_scale,
        f_tilde=dp.f / dp.a_scale,
    )


def default_initial(n: int) -> State:
    """Default seeded initial data on a grid with n intervals.

    Clean water (v1 = 0) over a slightly used filter (sigma1 = 0.1) with a
    unit predator seed: sigma2 = 1 on the filter and v2 following the cubic
    ramp x^2 (3 - 2x).  The ramp vanishes at the outlet and has zero slope
    at the intake, matching the shape the boundary conditions impose, and
    the small starting load keeps the filtration level away from the exact
    clean-filter limit, where the eliminated outlet stencil briefly loses
    its sign structure and the fields can dip a few 1e-5 below zero.  With
    this seed both fields stay nonnegative at every step, and the
    long-time behavior is the same as for any other small positive seed.
    """
    x = np.linspace(0.0, 1.0, n + 1)
    return State(np.zeros(n + 1), x * x * (3.0 - 2.0 * x), 0.1, 1.0)


def with_feeding(p: ModelParams, f_tilde: float) -> ModelParams:
    """Copy of p with a different feeding rate."""
    return replace(p, f_tilde=f_tilde)
