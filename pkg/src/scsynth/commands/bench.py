"""``scsynth bench`` -- run registered benchmarks and emit a CSV report."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import structlog

from scsynth.errors import UnknownBenchmarkError
from scsynth.services.benchmarks import (
    BenchmarkReport,
    benchmark_registry,
    default_config,
    get_benchmark,
    run_benchmark,
    write_report_csv,
)

log = structlog.get_logger()


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bench", help="run benchmarks")
    parser.add_argument("names", nargs="*")
    parser.add_argument("--all", action="store_true", help="run the whole registry")
    parser.add_argument("--budget", type=int)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--chains", type=int, default=1)
    parser.add_argument("--grid", type=int)
    parser.add_argument("--n", type=int, help="SN length")
    parser.add_argument("--out", help="CSV path (default: stdout)")


def run(args: argparse.Namespace) -> int:
    names = [b.name for b in benchmark_registry()] if args.all else list(args.names)
    overrides = {"seed": args.seed}
    if args.budget is not None:
        overrides["budget"] = args.budget
    if args.beta is not None:
        overrides["beta"] = args.beta

    reports: list[BenchmarkReport] = []
    for name in names:
        try:
            bench = get_benchmark(name)
        except UnknownBenchmarkError:
            log.warning("benchmark_unknown", benchmark=name)
            continue
        reports.append(
            run_benchmark(
                name,
                default_config(bench, **overrides),
                chains=args.chains,
                grid=args.grid,
                sn_length=args.n,
            )
        )

    if args.out:
        with Path(args.out).open("w", newline="", encoding="utf-8") as fh:
            write_report_csv(reports, fh)
    else:
        write_report_csv(reports, sys.stdout)
    return 0 if reports else 1
