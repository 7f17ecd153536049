"""Grid, ghost elimination, and spatial-operator tests against dense oracles."""

import numpy as np
import pytest

from aquafilter.discretize import (GridSpec, apply_operator, ghost_values,
                                   operator_coefficients, spatial_average,
                                   spatial_operator)


class TestGridSpec:
    def test_spacing_and_nodes(self):
        g = GridSpec(8)
        assert g.dx == pytest.approx(0.125)
        assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0
        assert len(g.nodes) == 9

    def test_too_coarse_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(3)


class TestGhostValues:
    def test_known_pair(self):
        # hand-derived: theta=0.5: A=0.5, D=1.25; u1=1, u_{N-1}=0 gives
        # u_{N+1} = 2*0.5*1/1.25 = 0.8, u_{-1} = (0.25-1)*1/1.25 = -0.6
        gp = ghost_values(0.5, 1.0, 0.0)
        assert gp.u_right_ghost == pytest.approx(0.8, rel=1e-15)
        assert gp.u_left_ghost == pytest.approx(-0.6, rel=1e-15)

    def test_theta_zero_is_periodic_wrap(self):
        gp = ghost_values(0.0, 3.0, 7.0)
        assert gp.u_right_ghost == pytest.approx(3.0)   # copies u_1
        assert gp.u_left_ghost == pytest.approx(7.0)    # copies u_{N-1}

    def test_theta_one_mirror_and_antisymmetry(self):
        gp = ghost_values(1.0, 3.0, 7.0)
        assert gp.u_right_ghost == pytest.approx(7.0)   # Neumann mirror
        assert gp.u_left_ghost == pytest.approx(-3.0)   # odd reflection

    def test_satisfies_discrete_boundary_relations(self):
        # substituting the ghosts back must solve the 2x2 system exactly:
        #   A*(u_{N+1}+u_{N-1})/2 = (u_{-1}+u_1)/2
        #   (u_{N+1}-u_{N-1}) = A*(u_1-u_{-1})
        rng = np.random.default_rng(7)
        for _ in range(200):
            theta = rng.uniform(0.0, 1.0)
            u1, unm1 = rng.normal(size=2)
            gp = ghost_values(theta, u1, unm1)
            a = 1.0 - theta
            r1 = a * (gp.u_right_ghost + unm1) / 2 - (gp.u_left_ghost + u1) / 2
            r2 = (gp.u_right_ghost - unm1) - a * (u1 - gp.u_left_ghost)
            scale = max(1.0, abs(u1), abs(unm1))
            assert abs(r1) <= 1e-14 * scale
            assert abs(r2) <= 1e-14 * scale

    def test_out_of_range_theta_rejected(self):
        with pytest.raises(ValueError):
            ghost_values(1.5, 0.0, 0.0)
        with pytest.raises(ValueError):
            ghost_values(-0.1, 0.0, 0.0)


def _dense_oracle(n, nu, c, theta):
    """Independent dense construction: build the (n+3) ghost-extended stencil
    and eliminate the ghost columns by explicit substitution."""
    dx = 1.0 / n
    a = 1.0 - theta
    d = 1.0 + a * a
    # stencil over extended index space -1..n+1 (columns 0..n+2)
    ext = np.zeros((n + 1, n + 3))
    for j in range(n + 1):
        col = j + 1
        ext[j, col - 1] += nu / dx**2 + c / (2 * dx)
        ext[j, col] += -2 * nu / dx**2
        ext[j, col + 1] += nu / dx**2 - c / (2 * dx)
    # ghost value expressions in terms of u_1 and u_{n-1}
    mat = ext[:, 1:n + 2].copy()
    left = ext[:, 0]      # coefficient of u_{-1}
    right = ext[:, n + 2]  # coefficient of u_{n+1}
    mat[:, 1] += left * (a * a - 1.0) / d + right * (2 * a / d)
    mat[:, n - 1] += left * (2 * a / d) + right * ((1.0 - a * a) / d)
    return mat


class TestSpatialOperator:
    @pytest.mark.parametrize("n,nu,c,theta", [
        (4, 0.1, 0.05, 0.5),
        (5, 1.0, 0.0, 0.25),
        (8, 0.3, 0.2, 1.0),
        (16, 0.1, 0.1, 0.0),
    ])
    def test_matches_dense_elimination_oracle(self, n, nu, c, theta):
        got = spatial_operator(GridSpec(n), nu, c, theta)
        want = _dense_oracle(n, nu, c, theta)
        assert np.max(np.abs(got - want)) < 1e-10

    def test_theta_zero_equals_periodic_operator(self):
        # theta=0 wraps the ghosts onto the interior, reproducing the
        # periodic advection-diffusion stencil on nodes 0..N with the
        # identification u_{-1} = u_{N-1}, u_{N+1} = u_1
        n, nu, c = 8, 0.1, 0.05
        got = spatial_operator(GridSpec(n), nu, c, 0.0)
        dx = 1.0 / n
        lo = nu / dx**2 + c / (2 * dx)
        di = -2 * nu / dx**2
        up = nu / dx**2 - c / (2 * dx)
        want = np.zeros((n + 1, n + 1))
        for j in range(n + 1):
            want[j, j] = di
        for j in range(1, n):
            want[j, j - 1] = lo
            want[j, j + 1] = up
        want[0, 1] = up
        want[0, n - 1] = lo
        want[n, n - 1] = lo
        want[n, 1] = up
        assert np.max(np.abs(got - want)) < 1e-12

    def test_row_sums_vanish_for_pure_diffusion_theta_zero(self):
        # periodic diffusion annihilates constants
        mat = spatial_operator(GridSpec(8), 0.5, 0.0, 0.0)
        assert np.max(np.abs(mat @ np.ones(9))) < 1e-10

    def test_apply_operator_matches_dense(self):
        rng = np.random.default_rng(3)
        grid = GridSpec(12)
        co = operator_coefficients(grid, 0.2, 0.07, 0.3)
        mat = spatial_operator(grid, 0.2, 0.07, 0.3)
        for _ in range(5):
            u = rng.normal(size=13)
            assert np.allclose(apply_operator(co, u), mat @ u,
                               rtol=1e-13, atol=1e-13)

    def test_invalid_arguments(self):
        grid = GridSpec(8)
        with pytest.raises(ValueError):
            operator_coefficients(grid, -0.1, 0.0, 0.5)
        with pytest.raises(ValueError):
            operator_coefficients(grid, 0.1, 0.0, 1.5)
        co = operator_coefficients(grid, 0.1, 0.0, 0.5)
        with pytest.raises(ValueError):
            apply_operator(co, np.zeros(5))


class TestSpatialAverage:
    def test_constant(self):
        assert spatial_average(GridSpec(8), np.full(9, 3.0)) == pytest.approx(3.0)

    def test_linear_exact(self):
        # trapezoid rule integrates linears exactly: mean of x on [0,1] = 1/2
        g = GridSpec(16)
        assert spatial_average(g, g.nodes) == pytest.approx(0.5, rel=1e-14)

    def test_quadratic_error_order(self):
        # composite trapezoid error for x^2: exact 1/3, error dx^2/6
        for n in (8, 16, 32):
            g = GridSpec(n)
            err = spatial_average(g, g.nodes**2) - 1.0 / 3.0
            assert err == pytest.approx(g.dx**2 / 6.0, rel=1e-10)

    def test_shape_check(self):
        with pytest.raises(ValueError):
            spatial_average(GridSpec(8), np.zeros(10))
