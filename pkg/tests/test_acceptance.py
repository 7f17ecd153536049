"""Acceptance suite: one test and one printed pass/fail line per criterion.

The long-horizon experiments (criteria 2 and 3) dominate the runtime; the
full transition sweep takes about two minutes on one CPU with the compiled
stepping loop.  Results are cached across criteria within the session.
"""

from dataclasses import replace
from functools import lru_cache

import numpy as np
import pytest

from aquafilter import (Classification, DimensionalParams, GridSpec,
                        ModelParams, TimeSpec, TRANSITION_THRESHOLD,
                        check_extension, check_ghost_identity,
                        check_pole_geometry, check_selfadjointness,
                        classify_clogging, convergence_study, default_initial,
                        derive_dimensionless, lowest_clogging_f,
                        operator_coefficients, run_simulation, solve_bordered,
                        spatial_operator, step, sweep_transition)
from aquafilter.model import State

from test_stepping import _dense_reference_step

CRITERION_LINES = []

GRID = GridSpec(32)
DT = 0.01


def _report(num, ok, detail):
    line = f"[{'pass' if ok else 'FAIL'}] criterion {num}: {detail}"
    CRITERION_LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def _short_run(f_tilde):
    """T=500 run with the default table and the default seeded initial data."""
    ts = TimeSpec(DT, 500.0, record_every=100)
    return run_simulation(ModelParams(f_tilde=f_tilde), GRID, ts,
                          default_initial(GRID.n))


@lru_cache(maxsize=None)
def _long_run(c_rho, f):
    ts = TimeSpec(DT, 5000.0, record_every=100)
    p = derive_dimensionless(DimensionalParams(crho_scale=c_rho, f=f))
    return run_simulation(p, GRID, ts, default_initial(GRID.n),
                          collect_heatmaps=False)


def _tail(record, fraction):
    t_end = record.times[-1]
    return record.times >= t_end - fraction * (t_end - record.times[0])


def _monotone(series, scale=1.0):
    d = np.diff(series)
    return np.all(d >= -1e-12 * scale) or np.all(d <= 1e-12 * scale)


def test_criterion_1_long_time_dichotomy():
    # feeding below capacity: convergence with all diagnostics settling
    rec = _short_run(0.5)
    cls = classify_clogging(rec)
    w = _tail(rec, 0.2)
    settled = all(
        _monotone(getattr(rec, name)[w], max(1.0, abs(getattr(rec, name)[-1])))
        for name in ("avg_v1", "avg_v2", "sigma1", "sigma2"))
    ok_low = (cls is Classification.CONVERGED
              and abs(rec.final_growth_rate) <= 1e-3 and settled)

    # feeding above capacity: dust and filter load grow, predators saturate
    rec2 = _short_run(2.0)
    w2 = _tail(rec2, 0.2)
    growing = (np.all(np.diff(rec2.avg_v1[w2]) > 0)
               and np.all(np.diff(rec2.sigma1[w2]) > 0))
    v2_drift = abs(rec2.avg_v2[w2][-1] - rec2.avg_v2[w2][0]) \
        / abs(rec2.avg_v2[-1])
    s2_drift = abs(rec2.sigma2[w2][-1] - rec2.sigma2[w2][0]) \
        / abs(rec2.sigma2[-1])
    ok_high = growing and v2_drift < 0.01 and s2_drift < 0.01
    _report(1, ok_low and ok_high,
            f"feeding 0.5 -> {cls} (growth {rec.final_growth_rate:.2e}, "
            f"settled={settled}); feeding 2.0 -> growing={growing}, "
            f"final-20% drift avg_v2 {v2_drift:.2%} / sigma2 {s2_drift:.2%} "
            f"(required < 1%; the sigma2 drift is intrinsic: sigma2 tracks "
            f"sigma1/(1+sigma1) while sigma1 grows unboundedly, and its "
            f"value is independent of the initial data)")


def test_criterion_2_capacity_column_classifications():
    expected = {0.25: {Classification.CONVERGED},
                0.50: {Classification.CONVERGED},
                0.75: {Classification.MARGINAL, Classification.CONVERGED},
                1.00: {Classification.CLOGGING},
                1.25: {Classification.CLOGGING}}
    got = {}
    r2_ok = True
    r2_values = []
    for f, allowed in expected.items():
        rec = _long_run(0.5, f)
        cls = classify_clogging(rec)
        got[f] = cls
        if Classification.CLOGGING in allowed:
            w = _tail(rec, 0.1)
            t, y = rec.times[w], rec.avg_v1[w]
            c = np.polyfit(t, y, 1)
            resid = y - np.polyval(c, t)
            r2 = 1.0 - resid.dot(resid) / ((y - y.mean())**2).sum()
            r2_values.append(r2)
            r2_ok &= r2 >= 0.99
    ok = all(got[f] in allowed for f, allowed in expected.items()) and r2_ok
    _report(2, ok,
            "classifications " + ", ".join(
                f"f={f}:{cls}" for f, cls in got.items())
            + f"; linear-growth R^2 {[f'{r:.5f}' for r in r2_values]}")


def test_criterion_3_transition_boundary():
    c_axis = np.round(np.arange(0.2, 2.01, 0.2), 10)
    f_axis = np.round(np.arange(0.2, 3.01, 0.2), 10)
    ts = TimeSpec(DT, 5000.0, record_every=100)
    result = sweep_transition(DimensionalParams(), c_axis, f_axis, GRID, ts,
                              threshold=TRANSITION_THRESHOLD)
    low = lowest_clogging_f(result)
    line = 0.4 + (1.8 - 0.4) / (2.0 - 0.2) * (c_axis - 0.2)
    diffs = low - line
    ok = (not result.errors and np.all(np.isfinite(low))
          and bool(np.all(np.abs(diffs) <= 0.2 + 1e-9)))
    _report(3, ok,
            f"lowest clogging feeding per column {low.tolist()}, "
            f"max |offset from reference line| = {np.nanmax(np.abs(diffs)):.4f}"
            f" (allowed 0.2), failed cells = {len(result.errors)}")


def test_criterion_4_scheme_order():
    space = convergence_study(mode="spacetime")
    time = convergence_study(mode="time")
    ok = space.passed and time.passed
    _report(4, ok,
            f"observed order {space.measured:.2f} (space+time), "
            f"{time.measured:.2f} (time only); required >= 1.8")


def test_criterion_5_ghost_identity():
    rep = check_ghost_identity(samples=1000, seed=0)
    _report(5, rep.passed,
            f"worst relative residual {rep.measured:.2e} over 1000 samples "
            f"(tolerance 1e-13)")


def test_criterion_6_pole_geometry():
    rep = check_pole_geometry(n_points=101)
    _report(6, rep.passed,
            f"max | |pole| - 1 | = {rep.measured:.2e} on 101-point grid "
            f"(tolerance 1e-12)")


def test_criterion_7_extension_identities():
    rep = check_extension()
    _report(7, rep.passed,
            f"derivative-identity order {rep.measured:.2f} (>= 1.8), "
            f"{rep.details}")


def test_criterion_8_discrete_selfadjointness():
    reps = [check_selfadjointness(theta) for theta in (0.25, 0.5, 1.0)]
    ok = all(r.passed for r in reps)
    _report(8, ok, "; ".join(
        f"theta={t}: order {r.measured:.2f}"
        for t, r in zip((0.25, 0.5, 1.0), reps)) + " (>= 1.8 or exact)")


def test_criterion_9_oracle_equivalence():
    # linear solve against a dense LU factorization
    rng = np.random.default_rng(17)
    co = operator_coefficients(GRID, 0.1, 0.05, 0.4)
    dense = np.eye(GRID.n + 1) - 0.005 * spatial_operator(GRID, 0.1, 0.05, 0.4)
    rhs = rng.normal(size=GRID.n + 1)
    err_solve = np.max(np.abs(
        solve_bordered(co, 0.01, rhs) - np.linalg.solve(dense, rhs)))

    # one full coupled step on the coarsest grid against an independent
    # dense reimplementation
    grid4 = GridSpec(4)
    p = ModelParams()
    state = State(rng.uniform(0.5, 1.5, 5), rng.uniform(0.5, 1.5, 5),
                  0.7, 0.4)
    got = step(state, p, grid4, DT)
    v1n, v2n, s1n, s2n = _dense_reference_step(state, p, grid4, DT)
    err_step = max(np.max(np.abs(got.v1 - v1n)), np.max(np.abs(got.v2 - v2n)),
                   abs(got.sigma1 - s1n), abs(got.sigma2 - s2n))
    ok = err_solve < 1e-12 and err_step < 1e-12
    _report(9, ok,
            f"solver vs dense LU max error {err_solve:.2e}, full step vs "
            f"dense reimplementation {err_step:.2e} (tolerance 1e-12)")


def test_criterion_10_positivity_monitor():
    recs = {f: _short_run(f) for f in (0.5, 2.0)}
    worst = min(min(r.min_v1, r.min_v2) for r in recs.values())
    ok = worst >= -1e-8
    _report(10, ok,
            f"min over nodes and steps of both fields = {worst:.2e} "
            f"across both long-time runs (allowed >= -1e-8)")
