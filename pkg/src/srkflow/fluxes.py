"""Flow problems: spatial fluxes bound to a grid and its operators.

A *flow problem* packages the convection/diffusion/forcing terms of the
incompressible momentum equation together with the discrete
gradient/divergence/Laplacian bundle, and exposes the duck-typed
interface the SRK steppers consume (``expl``, ``impl``, ``solve_impl``,
``grad``, ``div``, ``solve_L``, ``bc_div``, ``bc_div_dt``).

The term partition is selected by ``mode``:

* ``"explicit"`` -- everything explicit (no implicit solves);
* ``"imex"``     -- convection and forcing explicit, diffusion implicit;
* ``"implicit"`` -- convection, diffusion and forcing implicit; the
  stage equation is solved by Picard iteration with lagged convection.

Convection uses the skew-symmetric splitting

    N(w) = 1/2 sum_d [ delta_d(w_d * w) + w_d * delta_d(w) ]

with the grid's central difference ``delta_d`` (order 2m periodic,
plain centred on the tensor grid), so that the discrete convection
drains no kinetic energy: (w, N(w)) = 0 on periodic grids.

On wall-bounded (tensor) grids the unknown is the interior velocity;
boundary data enter through a lifting ``u_b(t)`` (the prescribed
boundary trace extended by zero).  All spatial terms are evaluated on
the full field ``u + u_b(t)`` and then restricted to the interior.  The
continuity forcing is ``H(t) = -Div(u_b(t))``, with its time derivative
built from the boundary-data rate.
"""

import numpy as np

from .dirichlet_ops import DirichletOperators
from .periodic_ops import PeriodicOperators

MODES = ("explicit", "imex", "implicit")


class PeriodicFlowProblem:
    """Incompressible flow on a periodic box.

    ``forcing`` is ``None`` or a callable ``t -> velocity array``.
    ``order`` sets the finite-difference half-width m (accuracy 2m).
    """

    def __init__(self, grid, viscosity=0.0, order=1, mode="imex",
                 forcing=None, picard_tol=1e-12, picard_max=50):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.grid = grid
        self.ops = PeriodicOperators(grid, m=order)
        self.viscosity = float(viscosity)
        self.mode = mode
        self.forcing = forcing
        self.picard_tol = picard_tol
        self.picard_max = picard_max

    # -- physical terms -----------------------------------------------------

    def convection(self, w):
        """Skew-symmetric convection N(w); (w, N(w)) = 0."""
        out = np.zeros_like(w)
        for d in range(self.grid.dim):
            out += 0.5 * (self.ops.diff1(w[d] * w, d)
                          + w[d] * self.ops.diff1(w, d))
        return out

    def diffusion(self, w):
        if self.viscosity == 0.0:
            return np.zeros_like(w)
        return self.viscosity * self.ops.lap(w)

    def _force(self, t):
        if self.forcing is None:
            return 0.0
        return self.forcing(t)

    def residual(self, t, u, p):
        """Full momentum flux C + D - G p regardless of the partition."""
        return (-self.convection(u) + self.diffusion(u) + self._force(t)
                - self.grad(p))

    # -- stepper interface --------------------------------------------------

    def expl(self, t, u):
        if self.mode == "implicit":
            return np.zeros_like(u)
        out = -self.convection(u) + self._force(t)
        if self.mode == "explicit":
            out += self.diffusion(u)
        return out

    def impl(self, t, u):
        if self.mode == "explicit":
            return np.zeros_like(u)
        if self.mode == "imex":
            return self.diffusion(u)
        return -self.convection(u) + self.diffusion(u) + self._force(t)

    def solve_impl(self, t, u_star, taub):
        if self.mode == "explicit" or taub == 0.0:
            return u_star.copy()
        coef = taub * self.viscosity
        if self.mode == "imex":
            if coef == 0.0:
                return u_star.copy()
            return self.ops.solve_helmholtz(u_star, coef)
        # implicit convection: Picard iteration with lagged convection
        force = self._force(t)
        u = u_star.copy()
        for _ in range(self.picard_max):
            rhs = u_star + taub * (force - self.convection(u))
            u_new = self.ops.solve_helmholtz(rhs, coef)
            delta = float(np.max(np.abs(u_new - u)))
            u = u_new
            if delta <= self.picard_tol:
                return u
        raise RuntimeError(
            f"implicit velocity Picard iteration did not converge "
            f"within {self.picard_max} iterations (last update {delta:.2e})")

    def grad(self, p):
        return self.ops.grad(p)

    def div(self, u):
        return self.ops.div(u)

    def stab(self, p):
        return self.ops.stab(p)

    def solve_L(self, rhs):
        return self.ops.solve_lap(rhs)

    def bc_div(self, t):
        return 0.0

    def bc_div_dt(self, t):
        return 0.0


class DirichletFlowProblem:
    """Incompressible flow on a wall-bounded tensor grid.

    ``boundary_velocity`` / ``boundary_velocity_dt`` are ``None`` or
    callables ``t -> velocity array`` sampled on the whole grid; only
    their boundary trace is used.  ``forcing`` as for the periodic
    problem.
    """

    def __init__(self, grid, viscosity=0.0, mode="imex", forcing=None,
                 boundary_velocity=None, boundary_velocity_dt=None,
                 picard_tol=1e-12, picard_max=50):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if boundary_velocity is not None and boundary_velocity_dt is None:
            raise ValueError("time-dependent boundary data need their rate "
                             "(boundary_velocity_dt)")
        self.grid = grid
        self.ops = DirichletOperators(grid)
        self.viscosity = float(viscosity)
        self.mode = mode
        self.forcing = forcing
        self.boundary_velocity = boundary_velocity
        self.boundary_velocity_dt = boundary_velocity_dt
        self.picard_tol = picard_tol
        self.picard_max = picard_max

    # -- boundary lifting ---------------------------------------------------

    def lift(self, t):
        """Prescribed boundary trace at time t, extended by zero inside."""
        if self.boundary_velocity is None:
            return self.grid.velocity()
        ub = np.array(self.boundary_velocity(t), dtype=float)
        ub[..., self.grid.interior] = 0.0
        return ub

    def lift_dt(self, t):
        if self.boundary_velocity_dt is None:
            return self.grid.velocity()
        ub = np.array(self.boundary_velocity_dt(t), dtype=float)
        ub[..., self.grid.interior] = 0.0
        return ub

    # -- physical terms (full field in, interior restriction out) -----------

    def _dcent(self, f, axis):
        """Centred derivative at interior rows of ``axis``; zero elsewhere."""
        out = np.zeros_like(f)
        if axis == 0:
            x = self.grid.x
            out[..., 1:-1, :] = ((f[..., 2:, :] - f[..., :-2, :])
                                 / (x[2:] - x[:-2])[:, None])
        else:
            y = self.grid.y
            out[..., :, 1:-1] = ((f[..., :, 2:] - f[..., :, :-2])
                                 / (y[2:] - y[:-2]))
        return out

    def convection(self, w):
        out = np.zeros_like(w)
        for d in range(2):
            out += 0.5 * (self._dcent(w[d] * w, d) + w[d] * self._dcent(w, d))
        return self.grid.project_velocity(out)

    def diffusion(self, w):
        if self.viscosity == 0.0:
            return np.zeros_like(w)
        return self.viscosity * self.ops.lap_velocity(w)

    def _force(self, t):
        if self.forcing is None:
            return 0.0
        return self.grid.project_velocity(np.asarray(self.forcing(t),
                                                     dtype=float))

    def residual(self, t, u, p):
        w = u + self.lift(t)
        return (-self.convection(w) + self.diffusion(w) + self._force(t)
                - self.grad(p))

    # -- stepper interface --------------------------------------------------

    def expl(self, t, u):
        if self.mode == "implicit":
            return np.zeros_like(u)
        w = u + self.lift(t)
        out = -self.convection(w) + self._force(t)
        if self.mode == "explicit":
            out = out + self.diffusion(w)
        return out

    def impl(self, t, u):
        if self.mode == "explicit":
            return np.zeros_like(u)
        w = u + self.lift(t)
        if self.mode == "imex":
            return self.diffusion(w)
        return -self.convection(w) + self.diffusion(w) + self._force(t)

    def solve_impl(self, t, u_star, taub):
        if self.mode == "explicit" or taub == 0.0:
            return self.grid.project_velocity(u_star)
        coef = taub * self.viscosity
        ub = self.lift(t)
        if self.mode == "imex":
            if coef == 0.0:
                return self.grid.project_velocity(u_star)
            rhs = u_star + taub * self.diffusion(ub)
            return self.ops.solve_helmholtz(rhs, coef)
        force = self._force(t)
        diff_b = taub * self.diffusion(ub)
        u = self.grid.project_velocity(u_star)
        for _ in range(self.picard_max):
            rhs = (u_star + diff_b
                   + taub * (force - self.convection(u + ub)))
            u_new = self.ops.solve_helmholtz(rhs, coef)
            delta = float(np.max(np.abs(u_new - u)))
            u = u_new
            if delta <= self.picard_tol:
                return u
        raise RuntimeError(
            f"implicit velocity Picard iteration did not converge "
            f"within {self.picard_max} iterations (last update {delta:.2e})")

    def grad(self, p):
        return self.ops.grad(p)

    def div(self, u):
        return self.ops.div(u)

    def stab(self, p):
        return self.ops.stab(p)

    def solve_L(self, rhs):
        return self.ops.solve_lap(rhs)

    def bc_div(self, t):
        if self.boundary_velocity is None:
            return 0.0
        return -self.ops.div_full(self.lift(t))

    def bc_div_dt(self, t):
        if self.boundary_velocity is None:
            return 0.0
        return -self.ops.div_full(self.lift_dt(t))


def continuity_residual(problem, state, t, taub, r_sigma):
    """Stabilized continuity defect Div u + sigma_0 S p + sigma_1 S q - H."""
    xi = problem.div(state.u) - problem.bc_div(t)
    if r_sigma == 0:
        xi = xi + taub * problem.stab(state.p)
    else:
        xi = xi + taub**2 * problem.stab(state.q)
    return xi


def divergence_potential(problem, state, t):
    """Potential part of the velocity divergence, R0 = L^{-1}(Div u - H)."""
    return problem.solve_L(problem.div(state.u) - problem.bc_div(t))
