"""Segregated Runge-Kutta time integration for pressure-stabilized
incompressible flow on structured grids.

The package provides:

* structured grids and mimetic/spectral operator bundles
  (:mod:`srkflow.grids`, :mod:`srkflow.periodic_ops`,
  :mod:`srkflow.dirichlet_ops`);
* flow problems with explicit/IMEX/implicit term partitions
  (:mod:`srkflow.fluxes`);
* a registry of implicit-explicit Butcher tableau pairs
  (:mod:`srkflow.tableaux`);
* the segregated Runge-Kutta steppers (:mod:`srkflow.srk`);
* scalar stability analysis of the Baumgarte-relaxed step
  (:mod:`srkflow.stability`);
* verification cases and a run/convergence harness
  (:mod:`srkflow.cases`, :mod:`srkflow.harness`);
* a command line front end (:mod:`srkflow.cli`, installed as
  ``srkflow``).
"""

from .grids import PeriodicGrid, TensorGrid
from .srk import State, advance, step_form1, step_form2
from .stability import alpha_tau_max, default_alpha_tau
from .tableaux import Tableau, available_schemes, load_all, load_tableau
from .fluxes import DirichletFlowProblem, PeriodicFlowProblem
from .cases import CASE_NAMES, make_case
from .harness import RunReport, convergence_study, fit_slope, run_case

__version__ = "0.1.0"

__all__ = [
    "PeriodicGrid", "TensorGrid",
    "State", "advance", "step_form1", "step_form2",
    "alpha_tau_max", "default_alpha_tau",
    "Tableau", "available_schemes", "load_all", "load_tableau",
    "DirichletFlowProblem", "PeriodicFlowProblem",
    "CASE_NAMES", "make_case",
    "RunReport", "convergence_study", "fit_slope", "run_case",
    "__version__",
]
