"""Segregated Runge-Kutta (SRK) time stepping for velocity-pressure systems.

The semidiscrete problem is a differential-algebraic system for a
velocity ``u`` and a pressure ``p``:

    du/dt = C(t, u) + D(t, u) - G p                (momentum)
    Div u + sigma_0 S p + sigma_1 S dp/dt = H(t)   (continuity)

where ``C`` collects the explicitly integrated terms (convection,
forcing), ``D`` the implicitly integrated terms (diffusion), ``G`` and
``Div`` are the discrete gradient/divergence pair, ``S = Div G - L`` is
the pressure stabilization operator and ``H`` carries boundary data.
The stabilization sizes are tied to the timestep: with
``taub = a_ss * tau``,

    sigma_0 = (1 - r_sigma) * taub,   sigma_1 = r_sigma * taub**2,

so ``r_sigma = 0`` stabilizes with the pressure itself and
``r_sigma = 1`` with its time derivative ``q = dp/dt``.  A Baumgarte
relaxation with coefficient ``alpha`` keeps the constraint from
drifting; ``alpha * tau`` must stay below the method- and
r_sigma-dependent stability threshold (see the stability module).

Two step formulations are provided:

* ``step_form1`` -- each stage ends by evaluating the full explicit
  flux including the new stage pressure gradient.  Works for tableau
  kinds A, CK and ARS.
* ``step_form2`` -- each stage starts by evaluating the explicit flux
  at extrapolated values; the final pressure never enters an explicit
  flux.  Requires kind A (an invertible implicit tableau).

Both steppers are written against a small duck-typed problem interface
so the same code runs the actual flow solvers and the scalar stability
model:

    expl(t, u)                  explicit flux C(t, u)
    impl(t, u)                  implicit flux D(t, u)
    solve_impl(t, u_star, taub) solve u = u_star + taub * D(t, u)
    grad(p), div(u)             discrete gradient / divergence
    solve_L(rhs)                solve L x = rhs in the pressure space
    bc_div(t), bc_div_dt(t)     H(t) and dH/dt(t) (0.0 when absent)
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class State:
    """Solution triple at one time layer.

    ``q`` approximates dp/dt; it is carried along for r_sigma = 1 and
    stays zero for r_sigma = 0.
    """

    u: np.ndarray
    p: np.ndarray
    q: np.ndarray

    @staticmethod
    def from_fields(u, p, q=None):
        if q is None:
            q = np.zeros_like(p)
        return State(np.asarray(u, dtype=float), np.asarray(p, dtype=float),
                     np.asarray(q, dtype=float))


def _combine(pairs):
    """Linear combination sum(c * term) skipping zero coefficients.

    Returns 0.0 when everything is skipped, which broadcasts correctly
    in the surrounding array arithmetic.
    """
    acc = 0.0
    for coef, term in pairs:
        if coef != 0.0:
            acc = acc + coef * term
    return acc


def step_form1(problem, tableau, state, t0, tau, r_sigma, alpha):
    """One SRK step where stages end with the full explicit flux.

    Supports tableau kinds A (SDIRK), CK and ARS (ESDIRK); the tableau
    must be stiffly accurate.  Returns the new :class:`State`.
    """
    if r_sigma not in (0, 1):
        raise ValueError("r_sigma must be 0 or 1")
    kind = tableau.kind
    s = tableau.stages
    A, Ahat = tableau.A, tableau.Ahat
    b, bhat, c = tableau.b, tableau.bhat, tableau.c
    a_ss = tableau.a_ss
    taub = a_ss * tau
    u0, p0, q0 = state.u, state.p, state.q

    base_defect = alpha * (problem.div(u0) - problem.bc_div(t0))
    w0 = p0 if r_sigma == 0 else taub * q0

    Ku = [None] * s
    Khat = [None] * s
    q_stage = [None] * s
    mu_tilde = [None] * s
    d = nu1 = None

    if kind == "A":
        j0 = 0
    else:
        j0 = 1
        Khat[0] = problem.expl(t0, u0) - problem.grad(p0)
        q_stage[0] = q0
        if kind == "CK":
            Ku[0] = problem.impl(t0, u0)
            nu1 = (problem.div(Khat[0] + Ku[0]) - problem.bc_div_dt(t0)
                   + base_defect)
            d = tableau.d_vector()
        else:  # ARS: the first implicit column is zero, K^u_1 is never used
            Ku[0] = 0.0 * u0

    p_last = None
    for j in range(j0, s):
        tj = t0 + c[j] * tau

        # implicit velocity sub-step
        u_star = u0 + tau * _combine(
            [(A[j, k], Ku[k]) for k in range(j)]
            + [(Ahat[j, k], Khat[k]) for k in range(j)]
        )
        uj = problem.solve_impl(tj, u_star, taub)
        Ku[j] = (uj - u_star) / taub
        Cj = problem.expl(tj, uj)

        # pressure sub-step
        mu = _combine([(A[j, k] / a_ss, mu_tilde[k]) for k in range(j0, j)])
        if kind == "A":
            mu = mu + w0
        else:
            mu = mu + (1.0 - A[j, 0] * alpha * tau) * w0
        nu = d[j] * nu1 if kind == "CK" else 0.0
        if r_sigma == 1:
            p_star = p0 + tau * _combine(
                [(A[j, k], q_stage[k]) for k in range(j)])
        else:
            p_star = 0.0
        p_guess = p_star + mu - alpha * taub * w0
        rhs = (problem.div(Ku[j] + Cj - problem.grad(p_guess))
               - problem.bc_div_dt(tj) + base_defect - nu)
        pj = p_guess + problem.solve_L(rhs)
        mu_tilde[j] = pj - (p_star + mu)
        if r_sigma == 1:
            q_stage[j] = (pj - p_star) / taub
        Khat[j] = Cj - problem.grad(pj)
        p_last = pj

    un = u0 + tau * _combine(
        [(b[k], Ku[k]) for k in range(s)]
        + [(bhat[k], Khat[k]) for k in range(s)]
    )
    qn = q_stage[s - 1] if r_sigma == 1 else q0
    return State(un, p_last, qn)


def step_form2(problem, tableau, state, t0, tau, r_sigma, alpha):
    """One SRK step where stages start with extrapolated explicit fluxes.

    Requires an invertible SDIRK implicit tableau (kind A).  The final
    pressure never feeds back into an explicit flux, so the discrete
    continuity equation is not satisfied exactly; in exchange, type-A
    pairs gain substantial accuracy over :func:`step_form1`.
    """
    if r_sigma not in (0, 1):
        raise ValueError("r_sigma must be 0 or 1")
    if tableau.kind != "A":
        raise ValueError("step_form2 requires an invertible (kind A) tableau")
    s = tableau.stages
    A, Ahat = tableau.A, tableau.Ahat
    b, c, chat = tableau.b, tableau.c, tableau.chat
    taub = tableau.a_ss * tau
    u0, p0, q0 = state.u, state.p, state.q

    base_defect = alpha * (problem.div(u0) - problem.bc_div(t0))
    w0 = p0 if r_sigma == 0 else taub * q0

    H_u = [None] * s
    q_stage = [None] * s
    qdot = [None] * s

    p_last = None
    for j in range(s):
        # explicit fluxes at extrapolated velocity and pressure
        uE = u0 + tau * _combine([(Ahat[j, k], H_u[k]) for k in range(j)])
        pE = p0 + tau * _combine([(Ahat[j, k], q_stage[k]) for k in range(j)])
        Khat = problem.expl(t0 + chat[j] * tau, uE) - problem.grad(pE)

        # implicit velocity sub-step
        u_star = u0 + tau * A[j, j] * Khat + tau * _combine(
            [(A[j, k], H_u[k]) for k in range(j)])
        tj = t0 + c[j] * tau
        uj = problem.solve_impl(tj, u_star, taub)
        Kj = (uj - u_star) / taub
        H_u[j] = Kj + Khat

        # pressure sub-step
        p_star = p0 + tau * _combine([(A[j, k], q_stage[k]) for k in range(j)])
        if r_sigma == 1:
            q_star = q0 + tau * _combine([(A[j, k], qdot[k]) for k in range(j)])
        else:
            q_star = 0.0
        p_guess = p_star + taub * q_star - alpha * taub * w0
        # full momentum flux at (tj, uj, p_guess); the implicit part is
        # reused from the velocity solve, the explicit part is
        # re-evaluated at (tj, uj) since c and chat differ for kind A
        flux = problem.expl(tj, uj) + Kj - problem.grad(p_guess)
        rhs = problem.div(flux) - problem.bc_div_dt(tj) + base_defect
        pj = p_guess + problem.solve_L(rhs)
        q_stage[j] = (pj - p_star) / taub
        if r_sigma == 1:
            qdot[j] = (q_stage[j] - q_star) / taub
        p_last = pj

    un = u0 + tau * _combine([(b[k], H_u[k]) for k in range(s)])
    qn = q_stage[s - 1] if r_sigma == 1 else q0
    return State(un, p_last, qn)


def make_stepper(form):
    if form == "I":
        return step_form1
    if form == "II":
        return step_form2
    raise ValueError(f"unknown form {form!r} (expected 'I' or 'II')")


def advance(problem, tableau, state, t0, tau, n_steps, r_sigma, alpha,
            form="I", observer=None):
    """Run ``n_steps`` fixed steps; optionally call ``observer(i, t, state)``
    after each one (and once with i=0 for the initial state)."""
    step = make_stepper(form)
    t = t0
    if observer is not None:
        observer(0, t, state)
    for i in range(1, n_steps + 1):
        state = step(problem, tableau, state, t, tau, r_sigma, alpha)
        t = t0 + i * tau
        if observer is not None:
            observer(i, t, state)
    return state
