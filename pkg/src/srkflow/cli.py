"""Command line front end.

Subcommands::

    srkflow run        one case with one scheme; history + summary CSV
    srkflow converge   timestep refinement sweep; per-level summary CSV
    srkflow stability  (alpha*tau)_max table for both stabilization types
    srkflow cfl        explicit-part CFL limits and per-pressure-solve cost
    srkflow tableau    structural validation of the tableau registry

Options may also be supplied through ``--config FILE`` holding plain
``key = value`` lines with the same names as the long flags (without
the leading dashes, ``-`` and ``_`` interchangeable); explicit command
line flags override the file.  Output is CSV with a header row, written
to ``--out`` (directory, created on demand) or, for the table commands,
to stdout when no directory is given.
"""

import argparse
import csv
import os
import sys

from .cases import CASE_NAMES, make_case
from .harness import (cfl_report, convergence_study, fit_slope, run_case,
                      stability_report, tableau_report, write_csv,
                      write_history_csv, write_summary_csv)
from .tableaux import available_schemes, load_all, load_tableau


def read_config(path):
    """Parse ``key = value`` lines; '#' starts a comment; keys normalized."""
    values = {}
    with open(path) as f:
        for ln, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected 'key = value'")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_CASTS = {"rsigma": int, "alpha_factor": float, "n": int, "dt": float,
          "tmax": float, "levels": int}


def _apply_config(args, subparser, argv):
    """Fill options from the config file; explicit CLI flags win."""
    if not getattr(args, "config", None):
        return args
    values = read_config(args.config)
    actions = {a.dest: a for a in subparser._actions}
    for key, val in values.items():
        if key not in actions:
            raise ValueError(f"unknown config key {key!r}")
        if any(opt in argv for opt in actions[key].option_strings):
            continue  # given explicitly on the command line
        setattr(args, key, _CASTS.get(key, str)(val))
    return args


def _outdir(args):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    return args.out


def _emit(rows, columns, out, fname):
    if out:
        path = os.path.join(out, fname)
        write_csv(path, rows, columns)
        print(f"wrote {path}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])


def _schemes(args):
    if args.scheme:
        return [load_tableau(s) for s in args.scheme.split(",")]
    return load_all()


def _add_common(p):
    p.add_argument("--config", help="key=value option file; flags override it")
    p.add_argument("--out", help="output directory for CSV files")


def _add_run_options(p, with_scheme_default=False):
    # not marked required so they may come from --config instead
    p.add_argument("--case", choices=CASE_NAMES)
    p.add_argument("--scheme",
                   help="scheme name (see 'srkflow tableau' for the list)")
    p.add_argument("--form", choices=("1", "2"),
                   help="segregated step family (default: the tableau's)")
    p.add_argument("--mode", choices=("explicit", "imex", "implicit"),
                   default="imex", help="term partition (default imex)")
    p.add_argument("--rsigma", type=int, choices=(0, 1), default=1,
                   help="stabilization type (default 1)")
    p.add_argument("--alpha-factor", type=float, default=0.5,
                   help="alpha*tau as a fraction of its stability limit")
    p.add_argument("--n", type=int, help="grid resolution override")
    p.add_argument("--dt", type=float, help="timestep override")
    p.add_argument("--tmax", type=float, help="final time override")


def _run_kwargs(args):
    form = {"1": "I", "2": "II", None: None}[args.form]
    return dict(form=form, r_sigma=args.rsigma,
                alpha_factor=args.alpha_factor, tau=args.dt, t_max=args.tmax)


def _require(args, *keys):
    for key in keys:
        if getattr(args, key) is None:
            raise SystemExit(f"error: --{key} is required "
                             f"(flag or config file)")


def cmd_run(args):
    _require(args, "case", "scheme")
    case = make_case(args.case, n=args.n, mode=args.mode)
    report = run_case(case, args.scheme, **_run_kwargs(args))
    print(report.config_echo())
    print(f"e_u={report.e_u:.6e} e_p={report.e_p:.6e} e_k={report.e_k:.6e} "
          f"wall={report.wall_time:.3f}s")
    out = _outdir(args)
    if out:
        write_history_csv(os.path.join(out, "history.csv"), report)
        write_summary_csv(os.path.join(out, "summary.csv"), [report])
        print(f"wrote {out}/history.csv and {out}/summary.csv")
    return 0


def cmd_converge(args):
    _require(args, "case", "scheme")
    case = make_case(args.case, n=args.n, mode=args.mode)
    tau0 = args.dt if args.dt else case.default_tau(args.rsigma, args.mode)
    taus = [tau0 * 2.0**-k for k in range(args.levels)]

    def factory():
        return make_case(args.case, n=args.n, mode=args.mode)

    kw = _run_kwargs(args)
    kw.pop("tau")
    reports = [run_case(factory(), args.scheme, tau=tau, **kw) for tau in taus]
    rows = [{"scheme": r.scheme, "tau": r.tau, "e_u": r.e_u, "e_p": r.e_p,
             "e_k": r.e_k} for r in reports]
    for var in ("e_u", "e_p", "e_k"):
        slope = fit_slope(taus, [abs(getattr(r, var)) for r in reports])
        print(f"{var} slope: {slope:.3f}")
    _emit(rows, ["scheme", "tau", "e_u", "e_p", "e_k"], _outdir(args),
          "converge.csv")
    return 0


def cmd_stability(args):
    rows = stability_report(_schemes(args))
    _emit(rows, ["scheme", "form", "alpha_tau_max_rs0", "alpha_tau_max_rs1"],
          _outdir(args), "stability.csv")
    return 0


def cmd_cfl(args):
    rows = cfl_report(_schemes(args))
    _emit(rows, ["scheme", "kind", "cfl_max", "pressure_solves",
                 "cfl_per_solve"], _outdir(args), "cfl.csv")
    return 0


def cmd_tableau(args):
    rows = tableau_report(_schemes(args))
    _emit(rows, ["scheme", "form", "stages", "kind", "order",
                 "stiffly_accurate", "pressure_solves", "max_order_residual",
                 "b_equals_bhat"], _outdir(args), "tableau.csv")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="srkflow",
        description="Segregated Runge-Kutta incompressible flow toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    parser._subcommands = {}

    p_run = sub.add_parser("run", help="run one case with one scheme")
    _add_run_options(p_run)
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)
    parser._subcommands["run"] = p_run

    p_conv = sub.add_parser("converge", help="timestep refinement sweep")
    _add_run_options(p_conv)
    p_conv.add_argument("--levels", type=int, default=5,
                        help="number of halvings of the base timestep")
    _add_common(p_conv)
    p_conv.set_defaults(func=cmd_converge)
    parser._subcommands["converge"] = p_conv

    for name, func, help_ in (
        ("stability", cmd_stability, "Baumgarte stability limits"),
        ("cfl", cmd_cfl, "explicit-part CFL limits"),
        ("tableau", cmd_tableau, "tableau registry validation"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--scheme", help="comma-separated subset "
                       f"(default: all of {', '.join(available_schemes())})")
        _add_common(p)
        p.set_defaults(func=func)
        parser._subcommands[name] = p

    return parser


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(args, parser._subcommands[args.command], argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
