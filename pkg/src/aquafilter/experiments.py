"""Experiment drivers: single runs, clogging classification, parameter sweeps."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import _core, model
from .discretize import GridSpec, spatial_average
from .model import DimensionalParams, ModelParams, State, derive_dimensionless
from .stepping import NumericalBlowupError, TimeSpec, step

__all__ = [
    "Classification",
    "RunRecord",
    "SweepResult",
    "run_simulation",
    "classify_clogging",
    "sweep_transition",
    "lowest_clogging_f",
    "DEFAULT_THRESHOLD",
    "TRANSITION_THRESHOLD",
]

DEFAULT_THRESHOLD = 1e-3

# Threshold for tracing the convergence/clogging transition boundary in
# parameter sweeps.  Converged cells reach an exact steady state (the final
# growth rate is identically 0.0 in double precision), while cells beyond
# the filter's effective capacity keep a strictly positive drift, however
# slow, so the boundary is the zero/nonzero dichotomy rather than a
# fixed-rate cutoff.  1e-12 sits above accumulation-rounding noise and
# below the slowest observed genuine drift.
TRANSITION_THRESHOLD = 1e-12


class Classification(Enum):
    CONVERGED = "converged"
    CLOGGING = "clogging"
    MARGINAL = "marginal"

    def __str__(self):
        return self.value


@dataclass
class RunRecord:
    """Per-step diagnostics of one simulation."""

    times: np.ndarray
    avg_v1: np.ndarray
    avg_v2: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    c_value: np.ndarray
    f_tilde_value: np.ndarray
    heatmap_v1: np.ndarray       # (records, nodes); empty if not collected
    heatmap_v2: np.ndarray
    final_growth_rate: float
    min_v1: float = np.inf       # positivity monitor over all steps
    min_v2: float = np.inf

    def __post_init__(self):
        n = len(self.times)
        for name in ("avg_v1", "avg_v2", "sigma1", "sigma2", "c_value",
                     "f_tilde_value"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"diagnostic series {name} length mismatch")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("recorded times must be strictly increasing")


@dataclass
class SweepResult:
    """Growth rates and classifications over a (C_rho, f) grid.

    Matrices are indexed [i, j] for c_rho_values[i], f_values[j]; cells whose
    run failed carry NaN growth rate, None classification, and an entry in
    ``errors``.
    """

    c_rho_values: np.ndarray
    f_values: np.ndarray
    growth_rate: np.ndarray
    classification: np.ndarray   # dtype=object of Classification or None
    errors: dict

    def __post_init__(self):
        shape = (len(self.c_rho_values), len(self.f_values))
        if self.growth_rate.shape != shape or self.classification.shape != shape:
            raise ValueError("sweep matrices must match the axis lengths")


def _record_arrays(n_slots, n_nodes, collect_heatmaps):
    series = {k: np.empty(n_slots) for k in
              ("times", "avg_v1", "avg_v2", "sigma1", "sigma2",
               "c_value", "f_tilde_value")}
    shape = (n_slots, n_nodes) if collect_heatmaps else (0, n_nodes)
    return series, np.empty(shape), np.empty(shape)


def run_simulation(p: ModelParams, grid: GridSpec, timespec: TimeSpec,
                   initial: State, collect_heatmaps: bool = True,
                   compiled: bool = True) -> RunRecord:
    """Integrate from t=0 to t_end, recording diagnostics.

    Diagnostics are recorded at t=0, every ``record_every``-th step, and the
    final step.  ``compiled=False`` drives the reference single-step path
    instead of the compiled loop (identical scheme, slower; used for
    cross-checks).

    On numerical blowup a :class:`NumericalBlowupError` is raised carrying
    the partial record accumulated so far in its ``record`` attribute.
    """
    if initial.v1.shape != (grid.n + 1,):
        raise ValueError(
            f"initial data has {initial.v1.shape[0]} nodes, grid wants {grid.n + 1}")
    n_full, dt_last = timespec.step_sizes()
    n_total = n_full + (1 if dt_last is not None else 0)
    rec_idx = list(range(0, n_total, timespec.record_every))
    if rec_idx[-1] != n_total:
        rec_idx.append(n_total)

    m = grid.n + 1
    series, hm1, hm2 = _record_arrays(len(rec_idx), m, collect_heatmaps)
    state = initial.copy()
    minima = np.array([initial.v1.min(), initial.v2.min()])
    sigma = np.array([state.sigma1, state.sigma2])

    def record(slot, k):
        t = k * timespec.dt if (dt_last is None or k < n_total) \
            else timespec.t_end
        if dt_last is not None and k == n_total:
            t = timespec.t_end
        series["times"][slot] = t
        series["avg_v1"][slot] = spatial_average(grid, state.v1)
        series["avg_v2"][slot] = spatial_average(grid, state.v2)
        series["sigma1"][slot] = sigma[0]
        series["sigma2"][slot] = sigma[1]
        ft = model.f_tilde_of_sigma1(p, sigma[0])
        series["f_tilde_value"][slot] = ft
        series["c_value"][slot] = p.omega * ft
        if collect_heatmaps:
            hm1[slot] = state.v1
            hm2[slot] = state.v2

    def partial(n_slots, fail_step):
        trimmed = {k: v[:n_slots] for k, v in series.items()}
        return RunRecord(
            **trimmed,
            heatmap_v1=hm1[:n_slots] if collect_heatmaps else hm1,
            heatmap_v2=hm2[:n_slots] if collect_heatmaps else hm2,
            final_growth_rate=np.nan,
            min_v1=minima[0], min_v2=minima[1])

    record(0, 0)
    done = 0
    for slot, k_target in enumerate(rec_idx[1:], start=1):
        n_seg = k_target - done
        if compiled:
            n_main = n_seg
            has_last = dt_last is not None and k_target == n_total
            if has_last:
                n_main -= 1
            status = _core.STATUS_OK
            fail = 0
            if n_main > 0:
                status, fail = _core.advance(
                    state.v1, state.v2, sigma, p.nu1, p.nu2, p.r1_tilde,
                    p.r2, p.s1_tilde, p.s2, p.q1, p.q2, p.omega, p.beta,
                    p.b_scale, p.f_tilde, grid.dx, timespec.dt, n_main,
                    minima)
            if status == _core.STATUS_OK and has_last:
                status, fail = _core.advance(
                    state.v1, state.v2, sigma, p.nu1, p.nu2, p.r1_tilde,
                    p.r2, p.s1_tilde, p.s2, p.q1, p.q2, p.omega, p.beta,
                    p.b_scale, p.f_tilde, grid.dx, dt_last, 1, minima)
                fail += n_main
            if status != _core.STATUS_OK:
                raise NumericalBlowupError(
                    f"blowup at step {done + fail} "
                    f"(substep {_core.SUBSTEP_NAMES[status]})",
                    step_index=done + fail,
                    substep=_core.SUBSTEP_NAMES[status],
                    record=partial(slot, done + fail))
        else:
            for k in range(done, k_target):
                dt_k = timespec.dt
                if dt_last is not None and k == n_total - 1:
                    dt_k = dt_last
                try:
                    state = step(State(state.v1, state.v2, sigma[0],
                                       sigma[1], state.t), p, grid, dt_k)
                except NumericalBlowupError as exc:
                    exc.step_index = k
                    exc.record = partial(slot, k)
                    raise
                sigma[0], sigma[1] = state.sigma1, state.sigma2
                minima[0] = min(minima[0], state.v1.min())
                minima[1] = min(minima[1], state.v2.min())
        done = k_target
        record(slot, k_target)

    if len(rec_idx) >= 2:
        growth = ((series["avg_v1"][-1] - series["avg_v1"][-2])
                  / (series["times"][-1] - series["times"][-2]))
    else:
        growth = 0.0
    return RunRecord(**series, heatmap_v1=hm1, heatmap_v2=hm2,
                     final_growth_rate=growth,
                     min_v1=minima[0], min_v2=minima[1])


def classify_clogging(record: RunRecord,
                      threshold: float = DEFAULT_THRESHOLD) -> Classification:
    """Classify a completed run by its final growth rate and tail behavior.

    Clogging: growth rate above the threshold.  Converged: growth rate within
    the threshold and the spatial average of v1 changed by less than 1% over
    the final tenth of the run.  Marginal: anything else (slow drift).
    """
    gr = record.final_growth_rate
    if not np.isfinite(gr):
        raise ValueError("record is incomplete (non-finite growth rate)")
    if gr > threshold:
        return Classification.CLOGGING
    if abs(gr) <= threshold:
        t_end = record.times[-1]
        window = record.times >= t_end - 0.1 * (t_end - record.times[0])
        tail = record.avg_v1[window]
        denom = max(abs(tail[-1]), 1e-30)
        if abs(tail[-1] - tail[0]) / denom < 0.01:
            return Classification.CONVERGED
    return Classification.MARGINAL


def sweep_transition(base: DimensionalParams, c_rho_axis, f_axis,
                     grid: GridSpec, timespec: TimeSpec,
                     threshold: float = DEFAULT_THRESHOLD,
                     initial: State | None = None,
                     progress=None) -> SweepResult:
    """Run the clogging-transition sweep over a (C_rho, f) grid.

    Each cell re-derives the dimensionless parameters from the base
    dimensional set with its own C_rho and feeding rate, runs to t_end, and
    records the final growth rate plus classification.  Cells are
    independent; failures are recorded per cell and never abort the sweep.
    """
    c_rho_axis = np.asarray(c_rho_axis, dtype=float)
    f_axis = np.asarray(f_axis, dtype=float)
    for name, axis in (("c_rho", c_rho_axis), ("f", f_axis)):
        if axis.size == 0:
            raise ValueError(f"{name} axis is empty")
        if np.any(np.diff(axis) <= 0):
            raise ValueError(f"{name} axis must be strictly increasing")

    growth = np.full((c_rho_axis.size, f_axis.size), np.nan)
    cls = np.empty((c_rho_axis.size, f_axis.size), dtype=object)
    errors = {}
    for i, c_rho in enumerate(c_rho_axis):
        for j, f in enumerate(f_axis):
            p = derive_dimensionless(
                replace(base, crho_scale=c_rho, f=f))
            init = initial if initial is not None \
                else model.default_initial(grid.n)
            try:
                rec = run_simulation(p, grid, timespec, init,
                                     collect_heatmaps=False)
            except NumericalBlowupError as exc:
                errors[(i, j)] = str(exc)
                cls[i, j] = None
                continue
            growth[i, j] = rec.final_growth_rate
            cls[i, j] = classify_clogging(rec, threshold)
            if progress is not None:
                progress(i, j, growth[i, j], cls[i, j])
    return SweepResult(c_rho_axis, f_axis, growth, cls, errors)


def lowest_clogging_f(result: SweepResult):
    """Per C_rho column, the smallest f classified as clogging (NaN if none)."""
    out = np.full(result.c_rho_values.size, np.nan)
    for i in range(result.c_rho_values.size):
        for j, f in enumerate(result.f_values):
            if result.classification[i, j] is Classification.CLOGGING:
                out[i] = f
                break
    return out
