"""Command-line entry point: ``chemohapto run|suite|oracle|semigroup-check``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import scenarios
from .config import ConfigError, parse_config
from .model import Params
from .oracle import OdeState, ode_oracle
from .stepper import DivergenceError, SolverError


def _triple(text: str) -> tuple[float, float, float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers p,c,w")
    return tuple(parts)


def _params(text: str) -> Params:
    """``alpha=0.5,rho=0.5,...``; missing names keep their defaults."""
    values = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, _, val = item.partition("=")
        key = "lam" if key.strip() == "lambda" else key.strip()
        try:
            values[key] = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad parameter {item!r}") from None
    try:
        return Params(**values)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_run(args) -> int:
    try:
        cfg = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result = scenarios.run_scenario(cfg, args.out)
    except (DivergenceError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for msg in result.warnings:
        print(f"warning: {msg}")
    print(f"[{'PASS' if result.passed else 'FAIL'}] scenario {result.name}")
    for check in result.checks:
        print(check.line())
    for path in result.artifacts:
        print(f"  wrote {path}")
    return 0 if result.passed else 1


def _cmd_suite(args) -> int:
    results = scenarios.run_suite(args.filter)
    if not results:
        print(f"no criterion matches {args.filter!r}", file=sys.stderr)
        return 2
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def _cmd_oracle(args) -> int:
    series = ode_oracle(args.params, OdeState(*args.init), args.T, args.dt)
    every = max(1, round(args.every / args.dt)) if args.every else 1
    print("t,p,c,w")
    for i, s in enumerate(series):
        if i % every == 0 or i == len(series) - 1:
            print(f"{s.t!r},{s.p!r},{s.c!r},{s.w!r}")
    return 0


def _cmd_semigroup(args) -> int:
    checks = scenarios.semigroup_checks(args.length, args.modes)
    ok = all(c.passed for c in checks)
    print(f"[{'PASS' if ok else 'FAIL'}] semigroup checks L={args.length:g} K={args.modes}")
    for check in checks:
        print(check.line())
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chemohapto",
                                     description="Chemotaxis-haptotaxis simulator and checks")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None, help="directory for CSV output")
    run.set_defaults(func=_cmd_run)

    suite = sub.add_parser("suite", help="run the acceptance criteria")
    suite.add_argument("--filter", default=None, help="criterion number or title substring")
    suite.set_defaults(func=_cmd_suite)

    oracle = sub.add_parser("oracle", help="print the homogeneous RK4 series")
    oracle.add_argument("--params", type=_params, default=Params(),
                        help="e.g. alpha=0.5,rho=0.5,lambda=1,mu=1,gamma=1")
    oracle.add_argument("--init", type=_triple, required=True, help="p0,c0,w0")
    oracle.add_argument("-T", type=float, required=True)
    oracle.add_argument("--dt", type=float, default=1e-3)
    oracle.add_argument("--every", type=float, default=None, help="print spacing in time")
    oracle.set_defaults(func=_cmd_oracle)

    semi = sub.add_parser("semigroup-check", help="spectral heat semigroup checks")
    semi.add_argument("--length", type=float, default=1.0)
    semi.add_argument("--modes", type=int, default=16)
    semi.set_defaults(func=_cmd_semigroup)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
