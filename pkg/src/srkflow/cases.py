"""Verification cases: grids, flow problems, exact/initial data.

Each case bundles a grid, a flow problem, initial data, an optional
exact solution, and default run parameters:

* ``manufactured``  -- wall-bounded unit square, nu = 0.1, exact solution
  with linear-in-space velocity and pressure, so every spatial operator
  is exact and the measured error is pure time-integration error.
* ``tg2d_viscous``  -- travelling 2-d Taylor-Green vortex on a periodic
  box, nu = 0.5; closed-form decaying solution.
* ``tg2d_inviscid`` -- the same initial field with nu = 0.
* ``tg3d_inviscid`` -- 3-d Taylor-Green initial field, nu = 0; used for
  divergence preservation and kinetic-energy-loss studies.
* ``tg3d_re800``    -- 3-d Taylor-Green at Re = 800; qualitative
  dissipation-peak check.

Periodic cases use 6th-order operators, the wall-bounded case 2nd-order
ones.  Initial data are the exact fields sampled at t = 0 with
q = dp/dt = 0.  ``initial_state(compatible=True)`` instead chooses the
initial pressure so the stabilized continuity equation holds exactly at
t = 0 (required for exact divergence preservation when r_sigma = 0; on
a periodic grid that means a zero initial pressure).
"""

import numpy as np

from .fluxes import DirichletFlowProblem, PeriodicFlowProblem
from .grids import PeriodicGrid, TensorGrid
from .srk import State

CASE_NAMES = ("manufactured", "tg2d_viscous", "tg2d_inviscid",
              "tg3d_inviscid", "tg3d_re800")


class Case:
    """A ready-to-run verification case."""

    def __init__(self, name, grid, problem, exact_u=None, exact_p=None,
                 t_max=1.0, tau_rule=None, energy_reference="initial"):
        self.name = name
        self.grid = grid
        self.problem = problem
        self.exact_u = exact_u  # t -> velocity array (full field) or None
        self.exact_p = exact_p  # t -> scalar field or None
        self.t_max = t_max
        self._tau_rule = tau_rule
        #: "initial" (K(0)) or "after_two_steps" (undamped inviscid runs)
        self.energy_reference = energy_reference

    def initial_state(self, compatible=False):
        u0 = self.grid.project_velocity(self.exact_u(0.0))
        p0 = self.grid.project_pressure(self.exact_p(0.0))
        if compatible and self.grid.periodic:
            # Div u0 = 0 holds to roundoff for these initial fields, so
            # the r_sigma = 0 constraint sigma_0*S p0 = -Div u0 forces a
            # constant (zero) initial pressure.  (The wall-bounded case
            # has a linear exact pressure, annihilated by S already.)
            p0 = np.zeros_like(p0)
        return State.from_fields(u0, p0)

    def default_tau(self, r_sigma=1, mode="imex"):
        if self._tau_rule is None:
            raise ValueError(f"case {self.name!r} has no default timestep")
        return self._tau_rule(r_sigma, mode)

    def exact_state(self, t):
        if self.exact_u is None:
            return None
        return State.from_fields(self.grid.project_velocity(self.exact_u(t)),
                                 self.grid.project_pressure(self.exact_p(t)))


def _manufactured_g(t):
    return np.exp(t / 25.0) * np.sin(np.pi * t / 10.0)


def _manufactured_g_dt(t):
    return np.exp(t / 25.0) * (np.sin(np.pi * t / 10.0) / 25.0
                               + np.pi / 10.0 * np.cos(np.pi * t / 10.0))


def manufactured(n=10, mode="imex"):
    """Unit square, nu = 0.1, velocity (x, -y) g(t), pressure x + y.

    The forcing closes the momentum balance:

        f = (x (g' + g^2) + 1,  y (g^2 - g') + 1).

    All spatial discretizations are exact on these fields.
    """
    grid = TensorGrid.uniform(n, n)
    X, Y = grid.coords

    def exact_u(t):
        g = _manufactured_g(t)
        return np.stack([X * g, -Y * g])

    def exact_u_dt(t):
        gd = _manufactured_g_dt(t)
        return np.stack([X * gd, -Y * gd])

    def exact_p(t):
        return X + Y

    def forcing(t):
        g, gd = _manufactured_g(t), _manufactured_g_dt(t)
        return np.stack([X * (gd + g * g) + 1.0, Y * (g * g - gd) + 1.0])

    problem = DirichletFlowProblem(
        grid, viscosity=0.1, mode=mode, forcing=forcing,
        boundary_velocity=exact_u, boundary_velocity_dt=exact_u_dt)
    return Case("manufactured", grid, problem, exact_u, exact_p, t_max=0.1,
                tau_rule=lambda rs, md: 0.1)


def _tg2d_fields(grid, nu, ubar=1.0, vbar=0.0):
    X, Y = grid.coords

    def exact_u(t):
        xs, ys = X - ubar * t, Y - vbar * t
        damp = np.exp(-2.0 * nu * t)
        return np.stack([ubar + np.sin(xs) * np.cos(ys) * damp,
                         vbar - np.cos(xs) * np.sin(ys) * damp])

    def exact_p(t):
        xs, ys = X - ubar * t, Y - vbar * t
        return 0.25 * (np.cos(2.0 * xs) + np.cos(2.0 * ys)) * np.exp(-4.0 * nu * t)

    return exact_u, exact_p


def tg2d_viscous(n=32, mode="imex", order=3):
    """Travelling Taylor-Green vortex, nu = 0.5, mean velocity (1, 0)."""
    nu = 0.5
    grid = PeriodicGrid(2, n)
    problem = PeriodicFlowProblem(grid, viscosity=nu, order=order, mode=mode)
    exact_u, exact_p = _tg2d_fields(grid, nu)

    def tau_rule(r_sigma, md):
        h = grid.h
        if md == "explicit":
            return 1.0 / (2.0 / h + 6.0 * nu / h**2)
        return 0.5 * h

    return Case("tg2d_viscous", grid, problem, exact_u, exact_p, t_max=2.0,
                tau_rule=tau_rule)


def tg2d_inviscid(n=32, mode="imex", order=3):
    """The travelling vortex field with nu = 0 (laminar energy check)."""
    grid = PeriodicGrid(2, n)
    problem = PeriodicFlowProblem(grid, viscosity=0.0, order=order, mode=mode)
    exact_u, exact_p = _tg2d_fields(grid, 0.0)
    return Case("tg2d_inviscid", grid, problem, exact_u, exact_p, t_max=6.0,
                tau_rule=lambda rs, md: grid.h if rs == 0 else 0.7 * grid.h)


def _tg3d_fields(grid):
    X, Y, Z = grid.coords

    def exact_u(t):
        return np.stack([np.cos(X) * np.sin(Y) * np.sin(Z),
                         -np.sin(X) * np.cos(Y) * np.sin(Z),
                         np.zeros_like(X)])

    def exact_p(t):
        return (np.cos(2 * X) + np.cos(2 * Y)) * (2.0 + np.cos(2 * Z)) / 16.0

    return exact_u, exact_p


def tg3d_inviscid(n=32, mode="imex", order=3):
    """3-d Taylor-Green initial field, nu = 0, t_max = 6.

    The kinetic-energy loss e_k is measured against the energy after
    two timesteps.
    """
    grid = PeriodicGrid(3, n)
    problem = PeriodicFlowProblem(grid, viscosity=0.0, order=order, mode=mode)
    exact_u, exact_p = _tg3d_fields(grid)
    return Case("tg3d_inviscid", grid, problem, exact_u, exact_p, t_max=6.0,
                tau_rule=lambda rs, md: grid.h if rs == 0 else 0.7 * grid.h,
                energy_reference="after_two_steps")


def tg3d_re800(n=64, mode="imex", order=3):
    """3-d Taylor-Green at Re = 800; dissipation peak near t = 9."""
    grid = PeriodicGrid(3, n)
    problem = PeriodicFlowProblem(grid, viscosity=1.0 / 800.0, order=order,
                                  mode=mode)
    exact_u, exact_p = _tg3d_fields(grid)
    return Case("tg3d_re800", grid, problem, exact_u, exact_p, t_max=10.0,
                tau_rule=lambda rs, md: 0.8 * grid.h)


_BUILDERS = {
    "manufactured": manufactured,
    "tg2d_viscous": tg2d_viscous,
    "tg2d_inviscid": tg2d_inviscid,
    "tg3d_inviscid": tg3d_inviscid,
    "tg3d_re800": tg3d_re800,
}


def make_case(name, n=None, mode="imex", **kwargs):
    """Build a case by name; ``n`` overrides the default resolution."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown case {name!r}; available: {CASE_NAMES}")
    if n is not None:
        kwargs["n"] = n
    return _BUILDERS[name](mode=mode, **kwargs)
