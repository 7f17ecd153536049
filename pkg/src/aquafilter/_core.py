"""Compiled inner loop for long simulations.

Mirrors :func:`aquafilter.stepping.step` exactly (same substep order, same
frozen-operator Crank-Nicolson corrector, same Heun update for the boundary
ODEs) but runs many steps per call without Python overhead.  The linear
solves use the Thomas algorithm on the tridiagonal part plus a rank-2
Woodbury correction for the two corner couplings; the reference path uses a
LAPACK factorization, so the two agree to rounding accuracy, not bitwise.

Status codes returned by :func:`advance`: 0 ok, 1-4 blowup in
(v1, v2, sigma1, sigma2), 5 linear solver failure.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_BLOWUP_V1 = 1
STATUS_BLOWUP_V2 = 2
STATUS_BLOWUP_SIGMA1 = 3
STATUS_BLOWUP_SIGMA2 = 4
STATUS_SOLVER = 5

BLOWUP_LIMIT = 1e12

SUBSTEP_NAMES = {1: "v1", 2: "v2", 3: "sigma1", 4: "sigma2", 5: "solver"}


@njit(cache=True)
def _solve_cn(u, rhs, lo, di, up, r0c1, r0cm, rncm, rnc1, dt, out,
              dl, d, du, b, z0, zn):
    """Solve (I - dt/2 L) out = rhs; returns 0 on success, 5 on failure."""
    m = u.shape[0]
    h = 0.5 * dt
    for j in range(m - 1):
        dl[j] = -h * lo
        du[j] = -h * up
    for j in range(m):
        d[j] = 1.0 - h * di
    du[0] = -h * r0c1
    dl[m - 2] = -h * rncm
    ct = -h * r0cm
    cb = -h * rnc1

    for j in range(m):
        b[j] = rhs[j]
        z0[j] = 0.0
        zn[j] = 0.0
    z0[0] = 1.0
    zn[m - 1] = 1.0

    # Thomas forward sweep on the three right-hand sides
    if d[0] == 0.0:
        return STATUS_SOLVER
    w = 0.0
    for j in range(1, m):
        piv = d[j - 1]
        if piv == 0.0:
            return STATUS_SOLVER
        w = dl[j - 1] / piv
        d[j] -= w * du[j - 1]
        b[j] -= w * b[j - 1]
        z0[j] -= w * z0[j - 1]
        zn[j] -= w * zn[j - 1]
    if d[m - 1] == 0.0:
        return STATUS_SOLVER
    b[m - 1] /= d[m - 1]
    z0[m - 1] /= d[m - 1]
    zn[m - 1] /= d[m - 1]
    for j in range(m - 2, -1, -1):
        b[j] = (b[j] - du[j] * b[j + 1]) / d[j]
        z0[j] = (z0[j] - du[j] * z0[j + 1]) / d[j]
        zn[j] = (zn[j] - du[j] * zn[j + 1]) / d[j]

    # Woodbury rank-2 correction for the corner entries (0, N-1), (N, 1)
    s00 = 1.0 + ct * z0[m - 2]
    s01 = ct * zn[m - 2]
    s10 = cb * z0[1]
    s11 = 1.0 + cb * zn[1]
    det = s00 * s11 - s01 * s10
    if det == 0.0:
        return STATUS_SOLVER
    w0 = ct * b[m - 2]
    w1 = cb * b[1]
    mu0 = (s11 * w0 - s01 * w1) / det
    mu1 = (s00 * w1 - s10 * w0) / det
    for j in range(m):
        out[j] = b[j] - z0[j] * mu0 - zn[j] * mu1
    return STATUS_OK


@njit(cache=True)
def _field_substep(u, reac_k, reac_pred_buf, lo, di, up,
                   r0c1, r0cm, rncm, rnc1, dt, lu, rhs, out,
                   dl, d, du, b, z0, zn):
    """Predictor + CN corrector for one field; reactions precomputed/queued.

    ``reac_k`` holds r(u^k); ``reac_pred_buf`` must already hold r(u*) when
    this is called.  Kept tiny so both field substeps share the exact
    arithmetic of the reference path.
    """
    m = u.shape[0]
    for j in range(m):
        rhs[j] = u[j] + 0.5 * dt * (lu[j] + reac_k[j] + reac_pred_buf[j])
    return _solve_cn(u, rhs, lo, di, up, r0c1, r0cm, rncm, rnc1, dt, out,
                     dl, d, du, b, z0, zn)


@njit(cache=True)
def advance(v1, v2, sigma, nu1, nu2, r1t, r2, s1t, s2c, q1, q2,
            omega, beta, bscale, ftilde, dx, dt, n_steps, minima):
    """Advance the coupled system n_steps in place.

    ``sigma`` is the length-2 array (sigma1, sigma2); ``minima`` the running
    (min v1, min v2) pair, updated after every step.  Returns
    (status, failed_step) where failed_step = n_steps on success.
    """
    m = v1.shape[0]
    lu = np.empty(m)
    rk = np.empty(m)
    rp = np.empty(m)
    rhs = np.empty(m)
    out = np.empty(m)
    ustar = np.empty(m)
    dl = np.empty(m - 1)
    d = np.empty(m)
    du = np.empty(m - 1)
    b = np.empty(m)
    z0 = np.empty(m)
    zn = np.empty(m)

    for k in range(n_steps):
        s1 = sigma[0]
        s2 = sigma[1]
        theta = 1.0 / (1.0 + beta * bscale * s1)
        c = omega * theta
        a = 1.0 - theta
        dd = 1.0 + a * a

        for field in range(2):
            nu = nu1 if field == 0 else nu2
            lo = nu / dx**2 + c / (2.0 * dx)
            di = -2.0 * nu / dx**2
            up = nu / dx**2 - c / (2.0 * dx)
            r0c1 = up + lo * (a * a - 1.0) / dd
            r0cm = lo * 2.0 * a / dd
            rncm = lo + up * (1.0 - a * a) / dd
            rnc1 = up * 2.0 * a / dd

            u = v1 if field == 0 else v2
            # L u^k
            for j in range(1, m - 1):
                lu[j] = lo * u[j - 1] + di * u[j] + up * u[j + 1]
            lu[0] = di * u[0] + r0c1 * u[1] + r0cm * u[m - 2]
            lu[m - 1] = di * u[m - 1] + rncm * u[m - 2] + rnc1 * u[1]

            # reactions at level k (v2 reaction sees the updated v1)
            if field == 0:
                for j in range(m):
                    rk[j] = -r1t * v1[j] * v2[j] / (1.0 + v1[j]) + ftilde
            else:
                for j in range(m):
                    rk[j] = (r2 * v1[j] / (1.0 + v1[j]) - v2[j]) * v2[j]

            # Euler predictor and predicted reaction
            for j in range(m):
                ustar[j] = u[j] + dt * (lu[j] + rk[j])
            if field == 0:
                for j in range(m):
                    rp[j] = -r1t * ustar[j] * v2[j] / (1.0 + ustar[j]) + ftilde
            else:
                for j in range(m):
                    rp[j] = (r2 * v1[j] / (1.0 + v1[j]) - ustar[j]) * ustar[j]

            status = _field_substep(u, rk, rp, lo, di, up, r0c1, r0cm,
                                    rncm, rnc1, dt, lu, rhs, out,
                                    dl, d, du, b, z0, zn)
            if status != STATUS_OK:
                return status, k
            bad = False
            for j in range(m):
                x = out[j]
                if not np.isfinite(x) or abs(x) > BLOWUP_LIMIT:
                    bad = True
            if bad:
                return (STATUS_BLOWUP_V1 if field == 0
                        else STATUS_BLOWUP_V2), k
            for j in range(m):
                u[j] = out[j]

        # substep 3: sigma1, Heun with the updated v1 trace at x = 1
        tr1 = v1[m - 1]
        ft = 1.0 / (1.0 + beta * bscale * s1)
        g0 = -s1t * s1 * s2 / (1.0 + s1) + q1 * omega * ft * ft * tr1
        s1s = s1 + dt * g0
        fts = 1.0 / (1.0 + beta * bscale * s1s)
        g1v = -s1t * s1s * s2 / (1.0 + s1s) + q1 * omega * fts * fts * tr1
        s1n = s1 + 0.5 * dt * (g0 + g1v)
        if not np.isfinite(s1n) or abs(s1n) > BLOWUP_LIMIT:
            return STATUS_BLOWUP_SIGMA1, k

        # substep 4: sigma2, Heun with the updated sigma1 and v2 trace
        tr2 = v2[m - 1]
        ftn = 1.0 / (1.0 + beta * bscale * s1n)
        growth = s2c * s1n / (1.0 + s1n)
        influx = q2 * omega * ftn * ftn * tr2
        g0 = (growth - s2) * s2 + influx
        s2s = s2 + dt * g0
        g1v = (growth - s2s) * s2s + influx
        s2n = s2 + 0.5 * dt * (g0 + g1v)
        if not np.isfinite(s2n) or abs(s2n) > BLOWUP_LIMIT:
            return STATUS_BLOWUP_SIGMA2, k

        sigma[0] = s1n
        sigma[1] = s2n
        for j in range(m):
            if v1[j] < minima[0]:
                minima[0] = v1[j]
            if v2[j] < minima[1]:
                minima[1] = v2[j]
    return STATUS_OK, n_steps
