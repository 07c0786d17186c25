"""Flow problem terms: convection, diffusion, partitions, boundary data."""

import numpy as np
import pytest

from srkflow.fluxes import DirichletFlowProblem, PeriodicFlowProblem
from srkflow.grids import PeriodicGrid, TensorGrid
from srkflow.cases import manufactured, tg2d_viscous, tg3d_inviscid


def test_mode_validation():
    grid = PeriodicGrid(2, 8)
    with pytest.raises(ValueError):
        PeriodicFlowProblem(grid, mode="semi")
    with pytest.raises(ValueError):
        DirichletFlowProblem(TensorGrid.uniform(4, 4),
                             boundary_velocity=lambda t: 0.0)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_convection_skew_symmetry(order):
    """The split convection term drains no energy: (w, N(w)) = 0."""
    rng = np.random.default_rng(order)
    grid = PeriodicGrid(2, 16)
    prob = PeriodicFlowProblem(grid, order=order)
    for _ in range(5):
        w = rng.standard_normal((2,) + grid.shape)
        assert abs(grid.inner(w, prob.convection(w))) <= 1e-12 * grid.norm(w)**3


def test_convection_against_plain_stencil():
    """Skew form equals 0.5*(div(w_d w) + w.grad w) built by hand (m=1)."""
    rng = np.random.default_rng(3)
    grid = PeriodicGrid(2, 12)
    prob = PeriodicFlowProblem(grid, order=1)
    w = rng.standard_normal((2,) + grid.shape)

    def d(f, ax):
        return (np.roll(f, -1, axis=ax - 2) - np.roll(f, 1, axis=ax - 2)) / (2 * grid.h)

    expect = 0.5 * sum(d(w[k] * w, k) + w[k] * d(w, k) for k in range(2))
    assert np.allclose(prob.convection(w), expect, atol=1e-13)


@pytest.mark.parametrize("mode", ["explicit", "imex", "implicit"])
def test_partition_completeness_periodic(mode):
    """expl + impl always equals the full flux, whatever the split."""
    rng = np.random.default_rng(4)
    grid = PeriodicGrid(2, 12)
    prob = PeriodicFlowProblem(grid, viscosity=0.2, order=2, mode=mode,
                               forcing=lambda t: np.full((2,) + grid.shape,
                                                         np.sin(t)))
    u = rng.standard_normal((2,) + grid.shape)
    p = grid.project_pressure(rng.standard_normal(grid.shape))
    total = prob.expl(0.3, u) + prob.impl(0.3, u)
    assert np.allclose(total, prob.residual(0.3, u, p) + prob.grad(p),
                       atol=1e-13)


@pytest.mark.parametrize("mode", ["imex", "implicit"])
def test_solve_impl_satisfies_stage_equation_periodic(mode):
    rng = np.random.default_rng(5)
    grid = PeriodicGrid(2, 12)
    prob = PeriodicFlowProblem(grid, viscosity=0.15, order=1, mode=mode)
    u_star = rng.standard_normal((2,) + grid.shape)
    taub = 0.04
    u = prob.solve_impl(0.0, u_star, taub)
    assert np.allclose(u, u_star + taub * prob.impl(0.0, u), atol=1e-10)


@pytest.mark.parametrize("mode", ["imex", "implicit"])
def test_solve_impl_satisfies_stage_equation_dirichlet(mode):
    case = manufactured(mode=mode)
    prob, grid = case.problem, case.grid
    rng = np.random.default_rng(6)
    u_star = grid.project_velocity(rng.standard_normal((2,) + grid.shape))
    taub = 0.03
    t = 0.04
    u = prob.solve_impl(t, u_star, taub)
    assert np.allclose(u, grid.project_velocity(u_star + taub * prob.impl(t, u)),
                       atol=1e-9)


def test_manufactured_momentum_residual_is_roundoff():
    """The closed-form forcing closes the discrete momentum balance exactly
    (all spatial stencils are exact on linear fields)."""
    case = manufactured()
    prob = case.problem
    for t in (0.0, 0.04, 0.1):
        st = case.exact_state(t)
        # du/dt - (C + D - G p) should vanish on the interior
        g = np.exp(t / 25.0) * (np.sin(np.pi * t / 10.0) / 25.0
                                + np.pi / 10.0 * np.cos(np.pi * t / 10.0))
        X, Y = case.grid.coords
        dudt = case.grid.project_velocity(np.stack([X * g, -Y * g]))
        res = prob.residual(t, st.u, st.p) - dudt
        assert np.max(np.abs(res)) < 1e-12


def test_manufactured_continuity_data():
    """H(t) = -Div(boundary lifting) matches Div of the exact velocity."""
    case = manufactured()
    prob = case.problem
    for t in (0.0, 0.05):
        st = case.exact_state(t)
        xi = prob.div(st.u) - prob.bc_div(t)
        assert np.max(np.abs(xi)) < 1e-12


def test_forcing_matches_finite_differences_of_exact_solution():
    """Cross-check the closed-form source against (u_t + u.grad u
    - nu lap u + grad p) built from the exact fields."""
    case = manufactured()
    X, Y = case.grid.coords
    t, eps = 0.03, 1e-6

    def g(tt):
        return np.exp(tt / 25.0) * np.sin(np.pi * tt / 10.0)

    gv = g(t)
    gd = (g(t + eps) - g(t - eps)) / (2.0 * eps)
    # exact fields: u = (x g, -y g), p = x + y, nu lap u = 0
    u_t = np.stack([X * gd, -Y * gd])
    conv = np.stack([X * gv * gv, Y * gv * gv])  # (u.grad)u for this field
    grad_p = np.stack([np.ones_like(X), np.ones_like(Y)])
    f_expect = u_t + conv + grad_p
    f_code = np.asarray(case.problem.forcing(t))
    assert np.max(np.abs(f_code - f_expect)) < 1e-8


def test_tg2d_exact_solution_satisfies_equations():
    """The decaying vortex fields satisfy the discrete momentum balance to
    the spatial discretization error (6th-order stencils, smooth fields)."""
    case = tg2d_viscous(n=48)
    prob = case.problem
    t, eps = 0.2, 1e-6
    st = case.exact_state(t)
    dudt = (case.exact_u(t + eps) - case.exact_u(t - eps)) / (2.0 * eps)
    res = prob.residual(t, st.u, st.p) - dudt
    assert np.max(np.abs(res)) < 1e-6
    assert np.max(np.abs(prob.div(st.u))) < 1e-9


def test_tg3d_initial_field_divergence_free():
    case = tg3d_inviscid(n=16)
    st = case.initial_state()
    assert np.max(np.abs(case.problem.div(st.u))) < 1e-12
