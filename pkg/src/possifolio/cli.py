"""Command-line entry point: ``possifolio <subcommand> ...``.

Failures exit with status 1 and print one JSON line ``{"error": ..., "message": ...}``
to stderr; usage errors exit with status 2 (argparse).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .exact import solve_exact
from .frv import normalize_mode
from .harmony import HSParams, solve_hs
from .model import InstanceFormatError, PAPER_FIXTURES, fixture_path, load_instance, validate
from .montecarlo import (analytic_constraint_chance, analytic_objective_chance,
                         estimate_constraint_chance, estimate_objective_chance)
from .reduction import ChanceLevels, load_lp, reduce, save_lp
from .report import DIAGONAL, SweepConfig, parse_grid, reproduce_table


class CLIError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _master_seed() -> int:
    return int(os.environ.get("POSSIFOLIO_SEED", "0"))


def _load(path: str):
    p = Path(path)
    if not p.exists() and path in PAPER_FIXTURES:
        p = fixture_path(path)
    if not p.exists():
        raise CLIError("instance_not_found", f"instance file not found: {path}")
    try:
        inst = load_instance(p)
    except InstanceFormatError as exc:
        raise CLIError("instance_format", str(exc)) from exc
    issues = validate(inst)
    if issues:
        raise CLIError("instance_invalid", f"{path}: " + "; ".join(issues))
    return inst


def _lp(args):
    if getattr(args, "lp", None):
        try:
            lp = load_lp(args.lp)
        except (OSError, ValueError) as exc:
            raise CLIError("lp_format", f"{args.lp}: {exc}") from exc
    else:
        if not args.instance:
            raise CLIError("usage", "either --instance or --lp is required")
        if args.lam is None or args.eta is None:
            raise CLIError("usage", "--lambda and --eta are required with --instance")
        lp = reduce(_load(args.instance), ChanceLevels(args.lam, args.eta), args.quantile_mode)
    if args.ignore_return_constraint:
        lp = lp.without_return_constraint()
    return lp


def _print_solution(sol) -> None:
    print(f"status={sol.status}")
    print(f"objective={sol.objective:.12g}")
    print("x=" + ",".join(f"{v:.12g}" for v in sol.x))
    print(f"violation={sol.violation:.12g}")
    print(f"solver={sol.solver}")


def _hs_params(args, seed: int) -> HSParams:
    return HSParams(hms=args.hms, hmcr=args.hmcr, par=args.par, fw_frac=args.fw_frac,
                    max_improvisations=args.iters, seed=seed, hmcr_final=args.hmcr_final,
                    par_final=args.par_final, fw_final_frac=args.fw_final_frac)


def cmd_reduce(args) -> None:
    lp = _lp(args)
    if args.out:
        save_lp(lp, args.out)
    else:
        print(json.dumps(lp.to_dict(), indent=2))


def cmd_solve_exact(args) -> None:
    _print_solution(solve_exact(_lp(args)))


def cmd_solve_hs(args) -> None:
    seed = args.seed if args.seed is not None else _master_seed()
    sol = solve_hs(_lp(args), _hs_params(args, seed))
    _print_solution(sol)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "best_objective", "best_violation"])
            w.writerows((k, f"{obj:.12g}", f"{viol:.12g}") for k, obj, viol in sol.trace)


def cmd_validate_mc(args) -> None:
    inst = _load(args.instance)
    levels = ChanceLevels(args.lam, args.eta)
    lp = reduce(inst, levels, args.quantile_mode)
    x = solve_exact(lp.without_return_constraint()).x
    boundary = reduce(inst, levels, "exact").objective(x)
    f = boundary if args.f is None else args.f
    seed = args.seed if args.seed is not None else _master_seed()

    obj = estimate_objective_chance(inst, x, f, levels.eta, args.samples, seed)
    con = estimate_constraint_chance(inst, x, levels.eta, args.samples, seed)
    print("x=" + ",".join(f"{v:.12g}" for v in x))
    print(f"f={f:.12g}")
    for name, est, analytic in (
        ("objective_chance", obj, analytic_objective_chance(inst, x, f, levels.eta)),
        ("constraint_chance", con, analytic_constraint_chance(inst, x, levels.eta)),
    ):
        agrees = abs(est.p_hat - analytic) <= max(est.half_width, 3.0 / args.samples)
        print(f"{name}.p_hat={est.p_hat:.6g}")
        print(f"{name}.half_width={est.half_width:.6g}")
        print(f"{name}.analytic={analytic:.6g}")
        print(f"{name}.meets_lambda={est.verdict(levels.lam)}")
        print(f"{name}.verdict={'consistent' if agrees else 'inconsistent'}")


def cmd_reproduce_table(args) -> None:
    inst = _load(args.instance)
    grid = DIAGONAL if args.grid is None else parse_grid(args.grid)
    seed = args.seed if args.seed is not None else _master_seed()
    cfg = SweepConfig(quantile_mode=args.quantile_mode,
                      ignore_return_constraint=args.ignore_return_constraint,
                      master_seed=seed, replicas=args.seeds, hs=_hs_params(args, seed))
    text = reproduce_table(inst, grid, cfg, workers=args.workers)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _mode(text: str) -> str:
    try:
        return normalize_mode(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="possifolio",
                                     description="Fuzzy random portfolio selection toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def levels(p, required=True):
        p.add_argument("--instance", required=required,
                       help="instance file, or a bundled fixture name (table1, table1-prose)")
        p.add_argument("--lambda", dest="lam", type=float, required=required, help="probability level")
        p.add_argument("--eta", type=float, required=required, help="possibility level")
        p.add_argument("--quantile-mode", type=_mode, default="exact", help="exact | paper-2dp")

    def lp_source(p):
        levels(p, required=False)
        p.add_argument("--lp", help="reduced LP document written by `reduce`")
        p.add_argument("--ignore-return-constraint", action="store_true")

    def hs_flags(p):
        p.add_argument("--hms", type=int, default=6)
        p.add_argument("--hmcr", type=float, default=0.9)
        p.add_argument("--par", type=float, default=0.5)
        p.add_argument("--fw-frac", type=float, default=0.05, help="fret width as a fraction of U_j")
        p.add_argument("--iters", type=int, default=10_000)
        p.add_argument("--hmcr-final", type=float)
        p.add_argument("--par-final", type=float)
        p.add_argument("--fw-final-frac", type=float)

    p = sub.add_parser("reduce", help="emit the reduced LP as JSON")
    lp_source(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve-exact", help="greedy optimum of the reduced LP")
    lp_source(p)
    p.set_defaults(func=cmd_solve_exact)

    p = sub.add_parser("solve-hs", help="harmony search on the reduced LP")
    lp_source(p)
    hs_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", help="write best-so-far trace CSV here")
    p.set_defaults(func=cmd_solve_hs)

    p = sub.add_parser("validate-mc", help="simulate both chance constraints at the optimum")
    levels(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--f", type=float, help="objective threshold (default: the reduction boundary)")
    p.set_defaults(func=cmd_validate_mc)

    p = sub.add_parser("reproduce-table", help="sweep a (lambda, eta) grid into a CSV report")
    p.add_argument("--instance", default="table1")
    p.add_argument("--grid", help='e.g. "0.1,0.4,0.7,0.9" or "0.1:0.5,0.4:0.4" (default: diagonal)')
    p.add_argument("--quantile-mode", type=_mode, default="exact", help="exact | paper-2dp")
    p.add_argument("--ignore-return-constraint", action="store_true")
    p.add_argument("--seed", type=int, help="master seed (default: $POSSIFOLIO_SEED or 0)")
    p.add_argument("--seeds", type=int, default=1, help="HS replicas per cell")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    hs_flags(p)
    p.set_defaults(func=cmd_reproduce_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CLIError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
