"""Run driver: time loops, error reports, convergence studies, CSV output.

A run advances a case with a fixed timestep to its final time while
recording per-step diagnostics:

* ``K``        -- discrete kinetic energy;
* ``R0_norm``  -- node-averaged norm of the potential divergence part
  R0 = L^{-1}(Div u - H);
* ``Xi_norm``  -- node-averaged norm of the stabilized continuity
  defect Xi = Div u + sigma_0 S p + sigma_1 S q - H.

Errors against exact solutions are max-over-nodes of the pointwise
(vector) difference; the kinetic-energy defect is
e_k = 1 - K(t_max)/K_ref with K_ref = K after two steps for the
undamped inviscid runs and K(0) otherwise.  Convergence orders are
least-squares slopes of log(error) against log(timestep).
"""

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .fluxes import continuity_residual, divergence_potential
from .grids import max_node_error, node_average_norm
from .srk import advance
from .stability import default_alpha_tau
from .tableaux import Tableau, load_tableau


@dataclass
class RunReport:
    case: str
    scheme: str
    form: str
    mode: str
    r_sigma: int
    tau: float
    alpha_tau: float
    n_steps: int
    t: np.ndarray = field(repr=False, default=None)
    K: np.ndarray = field(repr=False, default=None)
    R0_norm: np.ndarray = field(repr=False, default=None)
    Xi_norm: np.ndarray = field(repr=False, default=None)
    e_u: float = np.nan
    e_p: float = np.nan
    e_k: float = np.nan
    wall_time: float = 0.0

    @property
    def K_ref(self):
        return self._K_ref

    def config_echo(self):
        return (f"case={self.case} scheme={self.scheme} form={self.form} "
                f"mode={self.mode} r_sigma={self.r_sigma} tau={self.tau:.10g} "
                f"alpha_tau={self.alpha_tau:.10g} n_steps={self.n_steps}")


def resolve_tableau(scheme):
    if isinstance(scheme, Tableau):
        return scheme
    return load_tableau(scheme)


def run_case(case, scheme, form=None, r_sigma=1, alpha_factor=0.5, tau=None,
             t_max=None, compatible_init=False, alpha_tau=None):
    """Advance ``case`` to ``t_max`` and return a :class:`RunReport`.

    ``tau`` defaults to the case's timestep rule, ``form`` to the
    tableau's declared target, and the Baumgarte coefficient to
    ``alpha_factor`` times the stability limit (pass ``alpha_tau`` to
    override it outright).  Aborts with a diagnostic on NaN.
    """
    tableau = resolve_tableau(scheme)
    if form is None:
        form = tableau.form
    if tau is None:
        tau = case.default_tau(r_sigma, case.problem.mode)
    if t_max is None:
        t_max = case.t_max
    if alpha_tau is None:
        alpha_tau = default_alpha_tau(tableau, r_sigma, form=form,
                                      factor=alpha_factor)
    n_steps = max(1, int(round(t_max / tau)))
    grid, problem = case.grid, case.problem
    taub = tableau.a_ss * tau
    state0 = case.initial_state(compatible=compatible_init)

    ts, Ks, R0s, Xis = [], [], [], []

    def observer(i, t, s):
        K = grid.kinetic_energy(s.u)
        if not np.isfinite(K):
            raise RuntimeError(
                f"non-finite kinetic energy at step {i} (t = {t:.6g}) of "
                f"{case.name} with {tableau.name}")
        ts.append(t)
        Ks.append(K)
        R0s.append(node_average_norm(grid, divergence_potential(problem, s, t)))
        Xis.append(node_average_norm(
            grid, continuity_residual(problem, s, t, taub, r_sigma)))

    start = time.perf_counter()
    final = advance(problem, tableau, state0, 0.0, tau, n_steps, r_sigma,
                    alpha_tau / tau, form=form, observer=observer)
    wall = time.perf_counter() - start

    report = RunReport(case=case.name, scheme=tableau.name, form=form,
                       mode=problem.mode, r_sigma=r_sigma, tau=tau,
                       alpha_tau=alpha_tau, n_steps=n_steps,
                       t=np.array(ts), K=np.array(Ks),
                       R0_norm=np.array(R0s), Xi_norm=np.array(Xis),
                       wall_time=wall)

    exact = case.exact_state(n_steps * tau)
    if exact is not None:
        report.e_u = max_node_error(final.u, exact.u)
        report.e_p = max_node_error(final.p, exact.p)
    if case.energy_reference == "after_two_steps" and len(Ks) > 2:
        report._K_ref = Ks[2]
    else:
        report._K_ref = Ks[0]
    if report._K_ref > 0.0:
        report.e_k = 1.0 - Ks[-1] / report._K_ref
    report._final_state = final
    return report


def fit_slope(taus, errors):
    """Least-squares slope of log(error) vs log(tau); NaN errors excluded."""
    taus = np.asarray(taus, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = np.isfinite(errors) & (errors > 0.0)
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(taus[keep]), np.log(errors[keep]), 1)[0])


def convergence_study(case_factory, scheme, taus, variable="e_u", **run_kw):
    """Run a timestep sweep and fit the order of the chosen error.

    ``case_factory`` builds a fresh case per run (cases carry solver
    caches); returns ``(reports, slope)``.
    """
    reports = [run_case(case_factory(), scheme, tau=tau, **run_kw)
               for tau in taus]
    errs = [abs(getattr(r, variable)) for r in reports]
    return reports, fit_slope(taus, errs)


# -- tables ------------------------------------------------------------------


def tableau_report(tableaux):
    """Structural validation rows: classification, stiff accuracy, orders."""
    rows = []
    for tab in tableaux:
        res = tab.order_condition_residuals()
        rows.append({
            "scheme": tab.name,
            "form": tab.form,
            "stages": tab.stages,
            "kind": tab.kind,
            "order": tab.order,
            "stiffly_accurate": tab.stiffly_accurate,
            "pressure_solves": tab.pressure_order_count,
            "max_order_residual": max(abs(v) for v in res.values()),
            "b_equals_bhat": bool(np.allclose(tab.b, tab.bhat, atol=1e-14)),
        })
    return rows


def cfl_report(tableaux):
    """Explicit-part advective stability limits, rounded down to 0.01."""
    rows = []
    for tab in tableaux:
        cfl = np.floor(tab.cfl_max() * 100.0) / 100.0
        sp = tab.pressure_order_count
        rows.append({"scheme": tab.name, "kind": tab.kind,
                     "cfl_max": cfl, "pressure_solves": sp,
                     "cfl_per_solve": cfl / sp})
    return rows


def stability_report(tableaux, alpha_factor=None):
    """Baumgarte stability limits (alpha*tau)_max for both r_sigma."""
    from .stability import alpha_tau_max
    rows = []
    for tab in tableaux:
        rows.append({
            "scheme": tab.name,
            "form": tab.form,
            "alpha_tau_max_rs0": alpha_tau_max(tab, 0),
            "alpha_tau_max_rs1": alpha_tau_max(tab, 1),
        })
    return rows


# -- CSV output ---------------------------------------------------------------


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, rows, columns=None):
    """Write dict rows as CSV with a header; deterministic formatting.

    Fields containing commas (scheme display names) are quoted.
    """
    if columns is None:
        columns = list(rows[0].keys())
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def write_history_csv(path, report):
    rows = [{"t": t, "K": K, "R0_norm": r0, "Xi_norm": xi}
            for t, K, r0, xi in zip(report.t, report.K,
                                    report.R0_norm, report.Xi_norm)]
    write_csv(path, rows, ["t", "K", "R0_norm", "Xi_norm"])


def write_summary_csv(path, reports):
    rows = [{"scheme": r.scheme, "tau": r.tau, "e_u": r.e_u, "e_p": r.e_p,
             "e_k": r.e_k} for r in reports]
    write_csv(path, rows, ["scheme", "tau", "e_u", "e_p", "e_k"])
