"""Command-line front end: experiment runner and acceptance suites."""

from __future__ import annotations

import argparse
import sys

from .harness import parse_config, run_acceptance_suite, run_experiment


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="zosaddle",
        description="Zeroth-order saddle-point solvers and benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the experiment described by a TOML config")
    run_p.add_argument("config", help="path to the experiment config file")
    run_p.add_argument("--output-dir", default=None, help="override the configured output directory")
    run_p.add_argument("--parallel", type=int, default=None, help="override the parallelism degree")
    run_p.add_argument("-v", "--verbose", action="count", default=0)

    acc_p = sub.add_parser("accept", help="run an acceptance suite")
    acc_p.add_argument(
        "suite",
        nargs="?",
        default="all",
        help="suite name (estimators, bounds, table2, reductions, rates, "
        "accounting, determinism, smoke, reference, all)",
    )
    acc_p.add_argument("-v", "--verbose", action="count", default=0)

    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            config = parse_config(args.config)
        except ValueError as err:
            print(err, file=sys.stderr)
            return 2
        return run_experiment(
            config,
            output_dir=args.output_dir,
            parallelism=args.parallel,
            verbose=args.verbose,
        )
    try:
        return run_acceptance_suite(args.suite, verbose=args.verbose)
    except ValueError as err:
        print(err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
