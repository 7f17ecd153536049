"""Time integration: explicit-Euler predictor + Crank-Nicolson corrector.

One step advances the coupled system in four substeps, each consuming the
previous one's output:

    1. v1  from (v1^k, v2^k, sigma1^k)
    2. v2  from (v1^{k+1}, v2^k, sigma1^k)
    3. sigma1 from (v1^{k+1}, v2^{k+1}, sigma1^k)
    4. sigma2 from (v1^{k+1}, v2^{k+1}, sigma1^{k+1}, sigma2^k)

The filtration level theta = F~(sigma1^k) and flow speed c = omega * theta
are frozen at time-k values through substeps 1-2, so each field solve uses a
single fixed linear operator.  The boundary ODEs use the same
predictor-corrector (Heun) recipe with the trace taken at node N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs

from . import model
from .discretize import (GridSpec, OperatorCoefficients, apply_operator,
                         operator_coefficients)
from .model import ModelParams, State

__all__ = [
    "TimeSpec",
    "NumericalBlowupError",
    "LinearSolverError",
    "euler_predictor",
    "crank_nicolson_solve",
    "solve_bordered",
    "step",
    "BLOWUP_LIMIT",
]

BLOWUP_LIMIT = 1e12


@dataclass(frozen=True)
class TimeSpec:
    """Uniform time stepping to t_end with diagnostic decimation."""

    dt: float = 0.01
    t_end: float = 500.0
    record_every: int = 1

    def __post_init__(self):
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt must be finite and > 0, got {self.dt}")
        if not np.isfinite(self.t_end) or self.t_end <= 0:
            raise ValueError(f"t_end must be finite and > 0, got {self.t_end}")
        if self.dt > self.t_end:
            raise ValueError(f"dt={self.dt} exceeds t_end={self.t_end}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")

    def step_sizes(self):
        """(number of full dt steps, size of the final shrunken step or None).

        If t_end is an integer multiple of dt the final step is a full one;
        otherwise the last step shrinks to land exactly on t_end.
        """
        ratio = self.t_end / self.dt
        n_full = int(round(ratio))
        if abs(n_full * self.dt - self.t_end) <= 1e-9 * self.t_end:
            return n_full, None
        n_full = int(np.floor(ratio))
        return n_full, self.t_end - n_full * self.dt


class NumericalBlowupError(RuntimeError):
    """A field value exceeded the blowup guard or went non-finite."""

    def __init__(self, message, step_index=None, substep=None, record=None):
        super().__init__(message)
        self.step_index = step_index
        self.substep = substep
        self.record = record   # partial RunRecord when raised from a run


class LinearSolverError(RuntimeError):
    """The Crank-Nicolson system could not be solved."""

    def __init__(self, message, dt=None, theta=None):
        super().__init__(message)
        self.dt = dt
        self.theta = theta


def euler_predictor(state: State, p: ModelParams, grid: GridSpec, dt: float,
                    field: str) -> np.ndarray:
    """Forward-Euler predictor u* = u^k + dt * (L u^k + r(u^k)) for one field.

    ``field`` selects "v1" or "v2".  For "v2" the reaction uses the v1 vector
    currently held in the state, matching the substep ordering in which v1
    has already been advanced.
    """
    theta = model.f_tilde_of_sigma1(p, state.sigma1)
    c = p.omega * theta
    if field == "v1":
        u = state.v1
        co = operator_coefficients(grid, p.nu1, c, theta)
        r = model.reaction_v1(p, state.v1, state.v2)
    elif field == "v2":
        u = state.v2
        co = operator_coefficients(grid, p.nu2, c, theta)
        r = model.reaction_v2(p, state.v1, state.v2)
    else:
        raise ValueError(f"field must be 'v1' or 'v2', got {field!r}")
    u_star = u + dt * (apply_operator(co, u) + r)
    if not np.all(np.isfinite(u_star)):
        raise NumericalBlowupError(
            f"non-finite predictor for {field}", substep=field)
    return u_star


def solve_bordered(co: OperatorCoefficients, dt: float,
                   rhs: np.ndarray) -> np.ndarray:
    """Solve (I - dt/2 * L) x = rhs for the eliminated operator L.

    The matrix is tridiagonal plus two off-band corner couplings
    (rows 0 and N against columns N-1 and 1).  The tridiagonal part is
    factored directly (LAPACK gtsv) and the rank-2 corner correction is
    applied via the Woodbury identity.
    """
    m = co.n + 1
    h = 0.5 * dt
    dl = np.full(m - 1, -h * co.lo)
    d = np.full(m, 1.0 - h * co.di)
    du = np.full(m - 1, -h * co.up)
    du[0] = -h * co.row0_c1
    dl[-1] = -h * co.rown_cm
    corner_top = -h * co.row0_cm   # entry (0, N-1)
    corner_bot = -h * co.rown_c1   # entry (N, 1)

    b = np.zeros((m, 3))
    b[:, 0] = rhs
    b[0, 1] = 1.0
    b[-1, 2] = 1.0
    gtsv, = get_lapack_funcs(("gtsv",), (b,))
    _, _, _, x, info = gtsv(dl, d, du, b)
    if info != 0:
        raise LinearSolverError(
            f"tridiagonal factorization failed (info={info})", dt=dt)
    y, z0, zn = x[:, 0], x[:, 1], x[:, 2]
    # Woodbury correction: A = T + e_0 (corner_top e_{N-1})^T
    #                            + e_N (corner_bot e_1)^T
    s = np.array([
        [1.0 + corner_top * z0[m - 2], corner_top * zn[m - 2]],
        [corner_bot * z0[1], 1.0 + corner_bot * zn[1]],
    ])
    w = np.array([corner_top * y[m - 2], corner_bot * y[1]])
    try:
        mu = np.linalg.solve(s, w)
    except np.linalg.LinAlgError as exc:
        raise LinearSolverError(
            f"singular corner correction: {exc}", dt=dt) from exc
    return y - z0 * mu[0] - zn * mu[1]


def crank_nicolson_solve(u_k: np.ndarray, r_k: np.ndarray,
                         r_pred: np.ndarray, nu: float, grid: GridSpec,
                         dt: float, theta: float, c: float) -> np.ndarray:
    """Crank-Nicolson corrector with the operator frozen at time-k data.

    Solves (I - dt/2 L) u^{k+1} = (I + dt/2 L) u^k + dt/2 (r_k + r_pred),
    where r_pred is the reaction evaluated at the Euler-predicted values.
    The linear solve is direct.
    """
    co = operator_coefficients(grid, nu, c, theta)
    rhs = u_k + 0.5 * dt * (apply_operator(co, u_k) + r_k + r_pred)
    u_next = solve_bordered(co, dt, rhs)
    if not np.all(np.isfinite(u_next)) or np.max(np.abs(u_next)) > BLOWUP_LIMIT:
        raise NumericalBlowupError(
            f"blowup in Crank-Nicolson solve (theta={theta}, dt={dt})")
    return u_next


def _heun_scalar(g, y0: float, dt: float) -> float:
    """Predictor-corrector (Heun) update for a scalar ODE y' = g(y)."""
    g0 = g(y0)
    y_star = y0 + dt * g0
    return y0 + 0.5 * dt * (g0 + g(y_star))


def step(state: State, p: ModelParams, grid: GridSpec, dt: float) -> State:
    """Advance the coupled system by one dt through the four substeps."""
    theta = model.f_tilde_of_sigma1(p, state.sigma1)
    c = p.omega * theta

    # substep 1: v1
    try:
        v1_star = euler_predictor(state, p, grid, dt, "v1")
        r_k = model.reaction_v1(p, state.v1, state.v2)
        r_pred = model.reaction_v1(p, v1_star, state.v2)
        v1_new = crank_nicolson_solve(state.v1, r_k, r_pred, p.nu1, grid, dt,
                                      theta, c)
    except NumericalBlowupError as exc:
        exc.substep = "v1"
        raise

    # substep 2: v2, reaction evaluated at the updated v1
    try:
        mid = State(v1_new, state.v2, state.sigma1, state.sigma2, state.t)
        v2_star = euler_predictor(mid, p, grid, dt, "v2")
        r_k = model.reaction_v2(p, v1_new, state.v2)
        r_pred = model.reaction_v2(p, v1_new, v2_star)
        v2_new = crank_nicolson_solve(state.v2, r_k, r_pred, p.nu2, grid, dt,
                                      theta, c)
    except NumericalBlowupError as exc:
        exc.substep = "v2"
        raise

    # substep 3: sigma1 with the updated trace at x = 1
    trace_v1 = v1_new[-1]
    sigma2_k = state.sigma2

    def g1(s1):
        ft = model.f_tilde_of_sigma1(p, s1)
        return (-p.s1_tilde * s1 * sigma2_k / (1.0 + s1)
                + p.q1 * p.omega * ft * ft * trace_v1)

    sigma1_new = _heun_scalar(g1, state.sigma1, dt)

    # substep 4: sigma2 with the updated sigma1 and v2 trace
    trace_v2 = v2_new[-1]
    ft_new = model.f_tilde_of_sigma1(p, sigma1_new)
    growth = p.s2 * sigma1_new / (1.0 + sigma1_new)
    influx = p.q2 * p.omega * ft_new * ft_new * trace_v2

    def g2(s2):
        return (growth - s2) * s2 + influx

    sigma2_new = _heun_scalar(g2, state.sigma2, dt)

    for name, value in (("sigma1", sigma1_new), ("sigma2", sigma2_new)):
        if not np.isfinite(value) or abs(value) > BLOWUP_LIMIT:
            raise NumericalBlowupError(
                f"blowup in boundary ODE {name}", substep=name)
    return State(v1_new, v2_new, sigma1_new, sigma2_new, state.t + dt)
