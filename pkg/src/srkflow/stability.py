"""Scalar amplification analysis of the segregated Runge-Kutta steps.

The Baumgarte coefficient ``alpha`` mainly controls how potential
(curl-free) velocity modes are damped, so its admissible range can be
found on a scalar model: drop the explicit/implicit fluxes and boundary
data, set ``tau = 1``, and restrict the step to a common eigenvector of
``Div G`` and ``L``.  With ``beta in [0, 1]`` defined by
``Div G w = (1 - beta) L w`` (so ``S w = -beta L w``), the operators
collapse to numbers:

    grad -> 1,   solve_L(div(.)) -> (1 - beta) * (.)

and one SRK step becomes a small linear map on the state amplitudes --
``(q, p, phi)`` for r_sigma = 1 and ``(p, phi)`` for r_sigma = 0, where
``phi`` is the amplitude of the potential velocity mode.  The step is
stable when the spectral radius of this amplification matrix stays
within the unit disc for every ``beta``.

A special case needs care: some methods have a defective double
eigenvalue exactly on the unit circle (e.g. ``beta = 1`` with
r_sigma = 1), where powers of the matrix grow linearly but not
exponentially.  Numerically such an eigenvalue splits by about
``sqrt(machine eps)``, so a pure eigenvalue test would flag it as
unstable.  Matrices whose eigenvalues exceed the unit disc only within
a small band are therefore re-checked by taking a large matrix power
and accepting at most polynomial growth.
"""

import numpy as np

from .srk import State, make_stepper

#: eigenvalues may exceed the unit circle by this much and still count
#: as stable outright
EIG_TOL = 1e-9
#: band above EIG_TOL in which the matrix-power fallback is consulted
DEFECT_BAND = 1e-6
#: number of squarings / growth bound for the matrix-power fallback
POWER_SQUARINGS = 20
POWER_BOUND = 1e10


class ScalarDivergenceModel:
    """Stand-in problem: one stabilized pressure mode, no fluxes.

    ``beta`` may be an array; the state amplitudes then carry the same
    shape and all modes are stepped at once.
    """

    def __init__(self, beta):
        self.beta = np.asarray(beta, dtype=float)

    def expl(self, t, u):
        return np.zeros_like(u)

    def impl(self, t, u):
        return np.zeros_like(u)

    def solve_impl(self, t, u_star, taub):
        return u_star.copy()

    def grad(self, p):
        return p

    def div(self, u):
        return (1.0 - self.beta) * u

    def solve_L(self, rhs):
        return rhs

    def bc_div(self, t):
        return 0.0

    def bc_div_dt(self, t):
        return 0.0


def amplification_matrix(tableau, r_sigma, alpha, beta, form=None):
    """Amplification matrices of one SRK step on the scalar model.

    Returns an array of shape ``beta.shape + (n, n)`` with ``n = 3``
    (state order ``q, p, phi``) for r_sigma = 1 and ``n = 2``
    (``p, phi``) for r_sigma = 0.
    """
    if form is None:
        form = tableau.form
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    model = ScalarDivergenceModel(beta)
    step = make_stepper(form)
    n = 3 if r_sigma == 1 else 2
    M = np.zeros(beta.shape + (n, n))
    for i in range(n):
        amp = np.zeros(n)
        amp[i] = 1.0
        if r_sigma == 1:
            qa, pa, ua = amp
        else:
            qa = 0.0
            pa, ua = amp
        state = State(np.full(beta.shape, ua), np.full(beta.shape, pa),
                      np.full(beta.shape, qa))
        out = step(model, tableau, state, 0.0, 1.0, r_sigma, alpha)
        column = (out.q, out.p, out.u) if r_sigma == 1 else (out.p, out.u)
        for r in range(n):
            M[..., r, i] = column[r]
    return M


def _power_growth_ok(mat):
    """Accept matrices whose powers grow at most polynomially.

    Squares the matrix POWER_SQUARINGS times (a power of about 1e6) and
    checks the result against POWER_BOUND.  A defective unit eigenvalue
    gives linear growth and passes; genuine exponential growth blows
    past the bound.
    """
    P = mat.copy()
    for _ in range(POWER_SQUARINGS):
        P = P @ P
        if not np.all(np.isfinite(P)):
            return False
    return float(np.max(np.abs(P))) <= POWER_BOUND


def is_stable(tableau, r_sigma, alpha, beta, form=None):
    """True when every amplification matrix over ``beta`` is power-bounded."""
    M = amplification_matrix(tableau, r_sigma, alpha, beta, form=form)
    rho = np.max(np.abs(np.linalg.eigvals(M)), axis=-1)
    if np.all(rho <= 1.0 + EIG_TOL):
        return True
    if np.any(rho > 1.0 + EIG_TOL + DEFECT_BAND):
        return False
    for idx in np.flatnonzero(rho > 1.0 + EIG_TOL):
        if not _power_growth_ok(M[idx]):
            return False
    return True


def default_betas():
    return np.linspace(0.0, 1.0, 201)


def alpha_tau_max(tableau, r_sigma, form=None, betas=None, tol=1e-3,
                  alpha_cap=64.0):
    """Largest stable ``alpha * tau`` on the scalar model (0.0 = unstable).

    Bisects to absolute accuracy ``tol`` assuming the stable ``alpha``
    range is an interval starting at 0.
    """
    if betas is None:
        betas = default_betas()

    def ok(a):
        return is_stable(tableau, r_sigma, a, betas, form=form)

    if not ok(tol):
        return 0.0
    lo, hi = tol, 4.0
    while ok(hi):
        lo = hi
        hi *= 2.0
        if hi > alpha_cap:
            return float(alpha_cap)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return float(lo)


_ALPHA_CACHE = {}


def default_alpha_tau(tableau, r_sigma, form=None, factor=0.5):
    """Default Baumgarte setting ``alpha * tau = factor * (alpha tau)_max``."""
    key = (tableau.name, tableau.form if form is None else form, r_sigma)
    if key not in _ALPHA_CACHE:
        _ALPHA_CACHE[key] = alpha_tau_max(tableau, r_sigma, form=form)
    return factor * _ALPHA_CACHE[key]
