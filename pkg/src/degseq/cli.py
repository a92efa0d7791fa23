"""Command-line interface: ``degseq <command> ...``.

Exit codes: 0 success, 1 negative verdict (not graphical, not interior,
iteration limit), 2 input error, 3 diverged, 4 infeasible degrees.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .beta_model import sample_graph
from .degree_sequences import erdos_gallai_check, interior_report
from .exceptions import DegseqError, FitDivergedError, NotInteriorError, ParseError
from .experiments import ExperimentSpec, run_consistency
from .graph_limits import MotifGraph, canonicalize_g, fit_graphon, hom_density_graphon
from .mle_solver import FitConfig, FitStatus, fit_mle, posterior_mode

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_DIVERGED = 3
EXIT_INFEASIBLE = 4

_FIT_EXIT = {
    FitStatus.CONVERGED: EXIT_OK,
    FitStatus.MAX_ITER: EXIT_NEGATIVE,
    FitStatus.DIVERGED: EXIT_DIVERGED,
    FitStatus.INFEASIBLE: EXIT_INFEASIBLE,
}

BUILTIN_MOTIFS = {
    "edge": MotifGraph.edge,
    "triangle": MotifGraph.triangle,
    "path3": lambda: MotifGraph.path(3),
    "cycle4": lambda: MotifGraph.cycle(4),
    "K4": lambda: MotifGraph.complete(4),
}


def _emit(text, out=None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fit_config(args):
    return FitConfig(tol=args.tol, max_iter=args.max_iter, divergence_bound=args.divergence_bound)


def cmd_check(args):
    degrees = io.read_degrees(args.degree_file)
    report = erdos_gallai_check(degrees)
    if args.json:
        _emit(io.dumps(report.to_dict()), args.out)
    else:
        verdict = "graphical" if report.graphical else "not graphical"
        detail = ""
        if not report.even_sum:
            detail = " (odd degree sum)"
        elif report.first_violation_k is not None:
            detail = f" (first violated inequality at k={report.first_violation_k})"
        _emit(f"{verdict}{detail}", args.out)
    return EXIT_OK if report.graphical else EXIT_NEGATIVE


def _fit_payload(report, **extra):
    return {**report.to_dict(), **extra}


def cmd_fit(args):
    d = io.read_degrees(args.degree_file, integer=False)
    x0 = None
    if args.x0:
        x0 = io.read_beta(args.x0)
    cfg = FitConfig(tol=args.tol, max_iter=args.max_iter, divergence_bound=args.divergence_bound, x0=x0)
    report = fit_mle(d, cfg)
    if args.json:
        _emit(io.dumps(_fit_payload(report)), args.out)
    else:
        lines = [f"status: {report.status.value}", f"iterations: {report.iterations}"]
        if report.message:
            lines.append(f"note: {report.message}")
        if report.beta_hat is not None:
            lines.append(f"residual: {report.residual_linf:.3g}  error bound: {report.error_bound:.3g}")
            lines.extend(repr(float(b)) for b in report.beta_hat)
        _emit("\n".join(lines), args.out)
    return _FIT_EXIT[report.status]


def cmd_posterior_mode(args):
    d = io.read_degrees(args.degree_file, integer=False)
    d0 = io.read_degrees(args.d0_file, integer=False)
    report = posterior_mode(d, args.n0, d0, _fit_config(args))
    _emit(io.dumps(_fit_payload(report, n0=args.n0, d0=[float(v) for v in d0])), args.out)
    return _FIT_EXIT[report.status]


def cmd_sample(args):
    beta = io.read_beta(args.beta_file)
    G = sample_graph(beta, args.seed)
    text = io.format_graph(G)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _motifs(args):
    motifs = [BUILTIN_MOTIFS[name]() for name in args.builtin or []]
    motifs += [io.read_motif(path) for path in args.motif or []]
    return motifs


def cmd_limit(args):
    f = io.read_degree_function(args.f_file)
    motifs = _motifs(args)
    try:
        fit = fit_graphon(f, args.grid, _fit_config(args), eps=args.eps)
    except NotInteriorError as exc:
        sys.stderr.write(f"rejected: {exc.report.diagnosis()}\n")
        return EXIT_NEGATIVE
    except FitDivergedError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_DIVERGED
    if not args.no_canonicalize:
        fit = canonicalize_g(fit, f)
    densities = [
        {"motif": H.name or f"k{H.k}", "k": H.k, "edges": [[a + 1, b + 1] for a, b in H.edges],
         "t": hom_density_graphon(H, fit)}
        for H in motifs
    ]
    payload = {**fit.to_dict(), "canonical": not args.no_canonicalize, "hom_densities": densities,
               "config": _fit_config(args).to_dict()}
    if args.w_csv:
        np.savetxt(args.w_csv, fit.W_grid(), delimiter=",", fmt="%.17g")
    _emit(io.dumps(payload), args.out)
    return EXIT_OK


def cmd_interior(args):
    f = io.read_degree_function(args.f_file)
    report = interior_report(f, args.eps)
    _emit(io.dumps({
        "interior": report.interior,
        "bounded_away": report.bounded_away,
        "eg_positive": report.eg_positive,
        "min_f": report.min_f,
        "max_f": report.max_f,
        "min_eg": report.min_eg,
        "argmin_eg": report.argmin_eg,
        "diagnosis": report.diagnosis(),
    }), args.out)
    return EXIT_OK if report.interior else EXIT_NEGATIVE


def cmd_consistency(args):
    spec = ExperimentSpec(n_list=tuple(args.n), L=args.L, trials=args.trials, seed=args.seed,
                          output_path=args.out)
    report = run_consistency(spec, _fit_config(args))
    if args.out:
        Path(args.out).write_text(report.scatter_csv())
    _emit(io.dumps(report.to_dict()), args.json_out)
    return EXIT_OK


def _add_fit_flags(p):
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--divergence-bound", type=float, default=50.0)


def build_parser():
    parser = argparse.ArgumentParser(prog="degseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Erdős–Gallai check of a degree file")
    p.add_argument("degree_file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fit", help="fit the β-model to a degree file")
    p.add_argument("degree_file")
    _add_fit_flags(p)
    p.add_argument("--x0", help="file with the starting point (beta format)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("posterior-mode", help="conjugate posterior mode for a degree file")
    p.add_argument("degree_file")
    p.add_argument("--n0", type=float, required=True)
    p.add_argument("--d0-file", required=True)
    _add_fit_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_posterior_mode)

    p = sub.add_parser("sample", help="sample a graph from a beta file")
    p.add_argument("beta_file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("limit", help="limit graphon of a degree function")
    p.add_argument("f_file")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--motif", action="append", help="motif file (repeatable)")
    p.add_argument("--builtin", action="append", choices=sorted(BUILTIN_MOTIFS), help="built-in motif")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--no-canonicalize", action="store_true")
    p.add_argument("--w-csv", help="write the dense W grid as CSV")
    _add_fit_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("interior", help="check whether a degree function is interior")
    p.add_argument("f_file")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_interior)

    p = sub.add_parser("consistency", help="β̂ vs β simulation over several n")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="scatter CSV path (n, trial, i, beta, beta_hat)")
    p.add_argument("--json-out", help="write the JSON report here instead of stdout")
    _add_fit_flags(p)
    p.set_defaults(func=cmd_consistency)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_INPUT
    except (DegseqError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
