"""Command-line interface: ``nolhd {construct,criteria,check,lasso,simulate}``.

Data goes to stdout (or ``--out``); diagnostics go to stderr.  Exit status is
0 on success, 2 for invalid input and 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constructors import (AnnealConfig, anneal_nolhd, es2_supersaturated, iid_uniform_sample,
                           kronecker_base, kronecker_construct, lemma1_construct,
                           random_latin_hypercube)
from .criteria import DEFAULT_T, compute_criteria
from .design import (OrthogonalArray, check_oa_strength2, format_design_csv, is_latin_hypercube,
                     rao_hamming_oa, read_design_csv)
from .exceptions import DomainError
from .lasso import LassoProblem, cross_validate, lambda_grid, lambda_max, solve_lasso
from .simulate import builtin_scenario, run_experiment, scenario_from_dict

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
METHODS = ("rlhd", "iid", "lemma1", "kron", "kron-base", "anneal", "ssd")


class UsageError(Exception):
    """Invalid flags or inputs; reported with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _range(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b, got {text!r}")
    return vals


def _envelope(seed, parameters: dict, **payload) -> dict:
    return {"tool_version": __version__, "seed": seed, "parameters": parameters, **payload}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> np.ndarray:
    try:
        return read_design_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: not a numeric CSV ({exc})") from exc


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"method {args.method} requires {', '.join(missing)}")


# -- subcommands ------------------------------------------------------------------


def cmd_construct(args) -> int:
    m = args.method
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "meta") and v is not None}
    rng = np.random.default_rng(args.seed)
    if m in ("rlhd", "iid"):
        _need(args, "n", "p")
        lo_hi = args.range or (-(args.n - 1) / 2, (args.n - 1) / 2)
        gen = random_latin_hypercube if m == "rlhd" else iid_uniform_sample
        D = gen(args.n, args.p, lo_hi, rng)
    elif m == "anneal":
        _need(args, "n", "p")
        D = anneal_nolhd(args.n, args.p, AnnealConfig(objective=args.objective), rng=rng)
    elif m == "ssd":
        _need(args, "n", "p")
        D = es2_supersaturated(args.n, args.p, rng, allow_odd=args.allow_odd)
    elif m == "lemma1":
        _need(args, "s")
        oa = rao_hamming_oa(args.s)
        f = args.f if args.f is not None else (args.s + 1) // 2
        if not 1 <= f <= (args.s + 1) // 2:
            raise UsageError(f"--f must lie in 1..{(args.s + 1) // 2} for s = {args.s}")
        if args.B is not None:
            B = _read(args.B)
        else:
            _need(args, "p")
            B = anneal_nolhd(args.s, args.p, AnnealConfig(objective=args.objective), rng=rng)
        D = lemma1_construct(OrthogonalArray(oa.values[:, :2 * f], oa.s), B)
    elif m == "kron":
        _need(args, "A", "B", "C", "D")
        A_list = [_read(p) for p in args.A.split(",")]
        C_list = [_read(p) for p in args.C.split(",")]
        B, Dm = _read(args.B), _read(args.D)
        r = args.r if args.r is not None else B.shape[0]
        D, report = kronecker_construct(A_list, C_list, B, Dm, r)
        print(f"prop1 cond_a={report.prop1.cond_a} cond_b={report.prop1.cond_b} "
              f"latin_hypercube={report.latin_hypercube.ok}", file=sys.stderr)
    else:
        _need(args, "A", "B", "C", "D")
        B = _read(args.B)
        r = args.r if args.r is not None else B.shape[0]
        D = kronecker_base(_read(args.A), B, _read(args.C), _read(args.D), r)
    _emit(format_design_csv(D), args.out)
    if args.meta:
        crit = compute_criteria(D) if D.p >= 2 else None
        info = {"kind": D.kind, "shape": list(D.shape)}
        if crit is not None:
            info.update(rho_max=crit.rho_max, rho_ave=crit.rho_ave, t=list(crit.t),
                        delta=crit.delta.tolist())
        Path(args.meta).write_text(_dump(_envelope(args.seed, params, design=info)))
    return EXIT_OK


def cmd_criteria(args) -> int:
    X = _read(args.input)
    crit = compute_criteria(X, args.t)
    out = _envelope(None, {"input": args.input, "t": list(args.t)},
                    n=int(X.shape[0]), p=int(X.shape[1]), rho_max=crit.rho_max,
                    rho_ave=crit.rho_ave, t=list(crit.t), delta=crit.delta.tolist())
    _emit(_dump(out), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    params = {"input": args.input, "oa": args.oa, "s": args.s}
    try:
        X = read_design_csv(args.input)
    except (OSError, ValueError) as exc:
        if isinstance(exc, OSError):
            raise UsageError(f"cannot read {args.input}: {exc.strerror or exc}") from exc
        _emit(_dump(_envelope(None, params, latin_hypercube=False,
                              reason=f"not a numeric CSV: {exc}")), args.out)
        return EXIT_OK
    if args.oa:
        rep = check_oa_strength2(np.rint(X).astype(np.int64), args.s)
        out = _envelope(None, params, orthogonal_array=rep.ok, reason=rep.reason,
                        columns=list(rep.columns) if rep.columns else None)
    else:
        rep = is_latin_hypercube(X)
        out = _envelope(None, params, **rep.to_dict())
    _emit(_dump(out), args.out)
    return EXIT_OK


def cmd_lasso(args) -> int:
    X = _read(args.X)
    y = _read(args.y).ravel()
    params = {"X": args.X, "y": args.y, "lambda": args.lam, "cv": args.cv, "folds": args.folds,
              "tol": args.tol, "max_iter": args.max_iter, "standardize": args.standardize,
              "rule": args.rule}
    extra = {}
    if args.lam is not None:
        lam = args.lam
    else:
        grid = lambda_grid(lambda_max(X, y))
        cv = cross_validate(X, y, args.folds, grid, rng=args.seed, tol=args.tol,
                            max_iter=args.max_iter, standardize=args.standardize,
                            rule=args.rule)
        lam = cv.lambda_
        extra = {"cv": {"grid": cv.grid.tolist(), "cv_mean": cv.cv_mean.tolist(),
                        "selected_index": cv.index}}
    fit = solve_lasso(LassoProblem(X, y, lam), args.tol, args.max_iter,
                      standardize=args.standardize)
    out = _envelope(args.seed if args.lam is None else None, params, fit=fit.to_dict(), **extra)
    _emit(_dump(out), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.scenario in ("ex4", "ex5", "ex6"):
        scn = builtin_scenario(args.scenario)
    else:
        try:
            scn = scenario_from_dict(json.loads(Path(args.scenario).read_text()))
        except OSError as exc:
            raise UsageError(f"cannot read scenario {args.scenario}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"scenario {args.scenario} is not valid JSON: {exc}") from exc
    changes = {}
    if args.reps is not None:
        changes["reps"] = args.reps
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if changes:
        scn = scn.with_(**changes)
    report = run_experiment(scn, workers=args.workers)
    _emit(report.to_json() + "\n", args.out)
    if args.gamma_csv:
        Path(args.gamma_csv).write_text(report.gamma_csv())
    for label, q in report.quartiles.items():
        print(f"{scn.name} {label}: q1={q['q1']:g} median={q['median']:g} q3={q['q3']:g}",
              file=sys.stderr)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nolhd", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"nolhd {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a design and write it as CSV")
    c.add_argument("--method", required=True, choices=METHODS)
    c.add_argument("--n", type=int, help="run size (rlhd, iid, anneal, ssd)")
    c.add_argument("--p", type=int, help="column count; for lemma1 the annealed seed width")
    c.add_argument("--s", type=int, help="lemma1: prime power s (design has s^2 runs)")
    c.add_argument("--f", type=int, help="lemma1: use 2f OA columns (default (s+1)//2)")
    c.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    c.add_argument("--range", type=_range, help="rlhd/iid: a,b (default -(n-1)/2,(n-1)/2)")
    c.add_argument("--objective", default="rho_ave", choices=("rho_ave", "rho_max", "weighted-delta"),
                   help="anneal objective (default rho_ave)")
    c.add_argument("--allow-odd", action="store_true", help="ssd: permit odd n (unbalanced columns)")
    c.add_argument("--A", help="kron: comma list of A_j CSVs; kron-base: A CSV")
    c.add_argument("--B", help="kron/kron-base: B CSV; lemma1: seed Latin hypercube CSV")
    c.add_argument("--C", help="kron: comma list of C_j CSVs; kron-base: C CSV")
    c.add_argument("--D", help="kron/kron-base: D CSV")
    c.add_argument("--r", type=float, help="kron scale r (default: rows of B)")
    c.add_argument("--out", help="output CSV (default stdout)")
    c.add_argument("--meta", help="also write a JSON summary here")
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("criteria", help="correlation criteria of a design CSV")
    k.add_argument("--input", required=True)
    k.add_argument("--t", type=_floats, default=DEFAULT_T,
                   help="thresholds, non-increasing (default 0.1,0.05,0.01,0.005)")
    k.add_argument("--out")
    k.set_defaults(func=cmd_criteria)

    h = sub.add_parser("check", help="Latin hypercube (or --oa strength-two) check")
    h.add_argument("--input", required=True)
    h.add_argument("--oa", action="store_true", help="check a 1-based symbol array instead")
    h.add_argument("--s", type=int, help="symbol count for --oa (default: max symbol)")
    h.add_argument("--out")
    h.set_defaults(func=cmd_check)

    las = sub.add_parser("lasso", help="fit the Lasso to X and y CSVs")
    las.add_argument("--X", required=True)
    las.add_argument("--y", required=True)
    grp = las.add_mutually_exclusive_group()
    grp.add_argument("--lambda", dest="lam", type=float, help="fixed penalty")
    grp.add_argument("--cv", action="store_true", help="choose the penalty by k-fold CV (default)")
    las.add_argument("--folds", type=int, default=5)
    las.add_argument("--seed", type=int, default=0, help="fold seed for --cv (default 0)")
    las.add_argument("--tol", type=float, default=1e-7)
    las.add_argument("--max-iter", type=int, default=100_000)
    las.add_argument("--standardize", action="store_true")
    las.add_argument("--rule", default="min", choices=("min", "1se"),
                     help="--cv selection: minimum CV error or the one-standard-error rule")
    las.add_argument("--out")
    las.set_defaults(func=cmd_lasso)

    s = sub.add_parser("simulate", help="run a false-selection experiment")
    s.add_argument("--scenario", required=True, help="ex4, ex5, ex6 or a scenario JSON path")
    s.add_argument("--reps", type=int)
    s.add_argument("--seed", type=int, help="master seed (default: scenario's)")
    s.add_argument("--workers", type=int, help="threads for replications (default: CPU count)")
    s.add_argument("--out", help="report JSON (default stdout)")
    s.add_argument("--gamma-csv", help="long-format gamma samples for plotting")
    s.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, DomainError, argparse.ArgumentTypeError) as exc:
        print(f"nolhd: error: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}",
              file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - top-level reporter
        print(f"nolhd: runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
