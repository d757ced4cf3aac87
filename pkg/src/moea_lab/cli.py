"""Command-line interface: single runs, sweep files, and bound validation."""

from __future__ import annotations

import argparse
import sys

from .algorithms import ALGORITHMS
from .bitstrings import RandomSource
from .bounds import validate_success_bounds
from .experiments import (
    ArmSpec,
    ExperimentSpec,
    parse_log_base,
    parse_sweep_file,
    run_experiment,
    speedup_table,
)

_CONTROLLER_NAMES = {
    "static": "static",
    "state-dependent": "state_dependent",
    "one-fifth": "one_fifth",
    "fitness-dependent": "fitness_dependent",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moea-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute seeded runs of one configuration")
    run_p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    run_p.add_argument("--benchmark", default=None, help="defaults to oneminmax / onemax")
    run_p.add_argument("--n", type=int, required=True)
    run_p.add_argument("--controller", choices=sorted(_CONTROLLER_NAMES), default=None)
    run_p.add_argument("--lambda", dest="lam", default=None, help="number or '7log'")
    run_p.add_argument("--k", type=float, default=None)
    run_p.add_argument("--c", type=float, default=None)
    run_p.add_argument("--update-strength", type=float, default=1.5)
    run_p.add_argument("--runs", type=int, default=1)
    run_p.add_argument("--seed", type=int, default=1)
    run_p.add_argument("--budget", type=int, default=10**9)
    run_p.add_argument("--log-base", default="e")
    run_p.add_argument("--out", default=None, help="summary CSV path; runs CSV lands beside it")

    sweep_p = sub.add_parser("sweep", help="run every arm of a sweep spec file")
    sweep_p.add_argument("--spec", required=True)

    vb = sub.add_parser("validate-bounds", help="Monte Carlo check of the analytic bounds")
    vb.add_argument("--n", type=int, required=True)
    vb.add_argument("--d", type=int, required=True)
    vb.add_argument("--lambda", dest="lam", type=int, required=True)
    vb.add_argument("--k", type=float, default=None)
    vb.add_argument("--c", type=float, default=None)
    vb.add_argument("--trials", type=int, default=10**5)
    vb.add_argument("--seed", type=int, default=1)
    return parser


def _parse_lambda_arg(text: str | None) -> float | str | None:
    if text is None or text == "7log":
        return text
    return float(text)


def _cmd_run(args) -> int:
    benchmark = args.benchmark or ("onemax" if args.algorithm == "opll-ga" else "oneminmax")
    arm = ArmSpec(
        name=args.algorithm,
        algorithm=args.algorithm,
        benchmark=benchmark,
        controller=_CONTROLLER_NAMES[args.controller] if args.controller else None,
        lam=_parse_lambda_arg(args.lam),
        k=args.k,
        c=args.c,
        update_strength=args.update_strength,
    )
    spec = ExperimentSpec(
        sizes=(args.n,),
        runs=args.runs,
        arms=(arm,),
        base_seed=args.seed,
        out=args.out,
        log_base=parse_log_base(args.log_base),
        budget=args.budget,
    )
    summary, _ = run_experiment(spec)
    for row in summary:
        print(
            f"{row.arm} n={row.n}: mean={row.mean_evals:.1f} stddev={row.stddev_evals:.1f} "
            f"min={row.min_evals} max={row.max_evals} covered={row.covered}/{row.runs}"
        )
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    spec = parse_sweep_file(args.spec)
    summary, _ = run_experiment(spec)
    by_arm: dict[str, list] = {}
    for row in summary:
        by_arm.setdefault(row.arm, []).append(row)
        print(
            f"{row.arm} n={row.n}: mean={row.mean_evals:.1f} stddev={row.stddev_evals:.1f} "
            f"covered={row.covered}/{row.runs}"
        )
    if len(by_arm) == 2:
        (name_a, rows_a), (name_b, rows_b) = by_arm.items()
        print(f"speedup {name_a}/{name_b}:")
        for n, ratio in speedup_table(rows_a, rows_b):
            print(f"  n={n}: {ratio:.2f}")
    if spec.out:
        print(f"wrote {spec.out}")
    return 0


def _cmd_validate_bounds(args) -> int:
    report = validate_success_bounds(
        n=args.n,
        d=args.d,
        lam=args.lam,
        k=args.k,
        c=args.c,
        trials=args.trials,
        rng=RandomSource(args.seed),
    )
    print(report.summary())
    return 0 if report.passed else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate_bounds(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
