"""Command-line front end.

Subcommands:
  coeffs    print factorization coefficients (strategy, inverse, or noise shape)
  rmse      evaluate the RMSE objective for one configuration
  sweep     sweep one scalar parameter over a grid
  compare   tuned best-in-class comparison across methods
  simulate  Monte Carlo estimate of the running-sum noise RMSE
  verify    run the numerical inequality suites

Output is CSV (default) or JSON with 17 significant digits, so identical
configurations produce byte-identical output.  Exit codes: 0 success, 2 usage
error, 3 domain/precondition violation, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .calibration import PrivacyBudget
from .catalog import DomainError, FactorizationSpec, Method, inverse_coeffs, strategy_coeffs
from .checks import SUITES, run_suite
from .engine import run_prefix_release
from .metrics import b_operator, rmse
from .sensitivity import ParticipationSchema, PreconditionError
from .tuner import DEFAULT_GAMMA_GRID, sweep, tune_method

_EXIT_DOMAIN = 3
_EXIT_VERIFY = 4


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _emit(columns, rows, fmt: str, out_path):
    """Write rows as CSV (header + %.17g floats) or an equivalent JSON array."""
    if fmt == "json":
        body = [
            {c: (_fmt(v) if isinstance(v, float) else v) for c, v in zip(columns, row)}
            for row in rows
        ]
        text = json.dumps(body, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_grid(text: str) -> np.ndarray:
    """Parse "lo:hi:step" into an inclusive grid, or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0.0 or hi < lo:
            raise DomainError(f"bad grid range {text!r}")
        count = int(round((hi - lo) / step)) + 1
        return np.round(lo + step * np.arange(count), 12)
    return np.array([float(p) for p in text.split(",")])


def _spec_from_args(args) -> FactorizationSpec:
    return FactorizationSpec(
        method=Method(args.method),
        n=args.n,
        gamma=args.gamma,
        lam=getattr(args, "lam", None),
        c=args.c,
        bandwidth=args.bandwidth,
    )


def _schema_from_args(args) -> ParticipationSchema:
    b = args.b if args.b is not None else args.n // args.k
    return ParticipationSchema(n=args.n, b=b, k=args.k)


def _budget_from_args(args) -> PrivacyBudget | None:
    if args.epsilon is None and args.delta is None:
        return None
    if args.epsilon is None or args.delta is None:
        raise DomainError("epsilon and delta must be given together")
    return PrivacyBudget(epsilon=args.epsilon, delta=args.delta)


def _add_common(p: argparse.ArgumentParser, schema: bool = True):
    p.add_argument("--n", type=int, required=True, help="number of steps")
    if schema:
        p.add_argument("--k", type=int, default=1, help="max participations")
        p.add_argument("--b", type=int, default=None, help="min separation (default n//k)")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")


def _add_method(p: argparse.ArgumentParser):
    p.add_argument("--method", choices=[m.value for m in Method], required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--bandwidth", type=int, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bifr", description="banded-inverse correlated-noise toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print factorization coefficients")
    _add_common(p, schema=False)
    _add_method(p)
    p.add_argument(
        "--which",
        choices=("strategy", "inverse", "b"),
        default="strategy",
        help="strategy matrix, its inverse, or the noise-shaping factor",
    )
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("rmse", help="evaluate the RMSE objective")
    _add_common(p)
    _add_method(p)
    p.set_defaults(func=_cmd_rmse)

    p = sub.add_parser("sweep", help="sweep one parameter over a grid")
    _add_common(p)
    _add_method(p)
    p.add_argument("--param", choices=("gamma", "lambda", "c", "bandwidth"), required=True)
    p.add_argument("--grid", required=True, help='"lo:hi:step" or comma list')
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare", help="tuned comparison across methods")
    _add_common(p)
    p.add_argument(
        "--methods",
        default="gamma-bifr,bisr,dp-lambda-cgd",
        help="comma-separated method names",
    )
    p.add_argument("--bandwidths", default=None, help="comma list of bandwidths")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo running-sum noise RMSE")
    _add_common(p)
    _add_method(p)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--noise-scale", type=float, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the numerical inequality suites")
    p.add_argument("--suite", default="all", choices=("all", *SUITES))
    p.add_argument("--quick", action="store_true", help="reduced grids")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def _cmd_coeffs(args) -> int:
    spec = _spec_from_args(args)
    op = {
        "strategy": strategy_coeffs,
        "inverse": inverse_coeffs,
        "b": b_operator,
    }[args.which](spec)
    rows = [(j, float(v)) for j, v in enumerate(op.coeffs)]
    _emit(("index", "coefficient"), rows, args.format, args.out)
    return 0


_REPORT_COLUMNS = (
    "method",
    "gamma",
    "lambda",
    "c",
    "bandwidth",
    "n",
    "b",
    "k",
    "frobenius_factor",
    "sensitivity",
    "rmse",
    "sigma",
    "scaled_rmse",
)


def _report_row(report) -> tuple:
    s = report.spec
    return (
        s.method.value,
        "" if s.gamma is None else s.gamma,
        "" if s.lam is None else s.lam,
        "" if s.c is None else s.c,
        "" if s.bandwidth is None else s.bandwidth,
        s.n,
        report.schema.b,
        report.schema.k,
        report.frobenius_factor,
        report.sensitivity,
        report.rmse,
        "" if report.sigma is None else report.sigma,
        "" if report.scaled_rmse is None else report.scaled_rmse,
    )


def _cmd_rmse(args) -> int:
    report = rmse(_spec_from_args(args), _schema_from_args(args), _budget_from_args(args))
    _emit(_REPORT_COLUMNS, [_report_row(report)], args.format, args.out)
    return 0


def _cmd_sweep(args) -> int:
    grid = parse_grid(args.grid)
    # Seed the swept field so the template validates before the sweep runs.
    field = {"gamma": "gamma", "lambda": "lam", "c": "c", "bandwidth": "bandwidth"}[args.param]
    if getattr(args, field) is None:
        seed_value = int(grid[0]) if args.param == "bandwidth" else float(grid[0])
        setattr(args, field, seed_value)
    result = sweep(
        _spec_from_args(args),
        args.param,
        grid,
        _schema_from_args(args),
        _budget_from_args(args),
    )
    rows = [(v, r, int(v == result.best_param)) for v, r in result.grid]
    _emit((args.param, "rmse", "best"), rows, args.format, args.out)
    return 0


def _cmd_compare(args) -> int:
    schema = _schema_from_args(args)
    bandwidths = None
    if args.bandwidths:
        bandwidths = [int(v) for v in args.bandwidths.split(",")]
    reports = [
        tune_method(Method(name), schema, bandwidths=bandwidths)
        for name in args.methods.split(",")
    ]
    reports.sort(key=lambda r: r.rmse)
    _emit(_REPORT_COLUMNS, [_report_row(r) for r in reports], args.format, args.out)
    return 0


def _cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    schema = _schema_from_args(args)
    budget = _budget_from_args(args)
    est = run_prefix_release(
        spec,
        schema,
        dim=args.dim,
        budget=budget,
        trials=args.trials,
        seed=args.seed,
        noise_scale=args.noise_scale,
    )
    analytic = rmse(spec, schema).frobenius_factor * est.noise_scale
    _emit(
        ("estimate", "stderr", "trials", "noise_scale", "analytic"),
        [(est.estimate, est.stderr, est.trials, est.noise_scale, analytic)],
        args.format,
        args.out,
    )
    return 0


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    failed = False
    for name in names:
        report = run_suite(name, quick=args.quick)
        rows.append(
            (
                name,
                report.grid_size,
                report.violations,
                report.worst_margin,
                "pass" if report.passed else "FAIL",
            )
        )
        failed = failed or not report.passed
    _emit(("suite", "grid_size", "violations", "worst_margin", "status"), rows,
          args.format, args.out)
    return _EXIT_VERIFY if failed else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
