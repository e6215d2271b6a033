#!/usr/bin/env python3
"""Proposal-throughput probe for the synthesizer.

Runs one chain on a 256-case suite (16x16 grid, two correlated inputs,
N=256) at I=8 with early stopping disabled, then reports proposals per second.

Usage:
    python scripts/throughput.py [--budget 20000] [--length 8] [--seed 0]

Exit codes:
    0 -- measured rate is at least the floor (default 100/s)
    1 -- measured rate is below the floor
"""

from __future__ import annotations

import argparse
import sys
import time

import structlog

from scsynth.log_setup import configure_logging
from scsynth.services.benchmarks import get_benchmark
from scsynth.services.cost import make_test_suite
from scsynth.services.synthesizer import SynthConfig, synthesize

TARGET_RATE = 1_000
FLOOR_RATE = 100

log = structlog.get_logger()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--budget", type=int, default=20_000)
    parser.add_argument("--length", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--floor", type=float, default=FLOOR_RATE)
    args = parser.parse_args()

    configure_logging()
    bench = get_benchmark("correlated_multiplier")
    suite = make_test_suite(bench.target_spec(grid=16, sn_length=256))
    cfg = SynthConfig(
        n_inputs=bench.n_inputs,
        program_length=args.length,
        budget=args.budget,
        seed=args.seed,
        early_stop_cost=None,
    )

    start = time.perf_counter()
    result = synthesize(cfg, suite)
    elapsed = time.perf_counter() - start
    rate = result.proposals_evaluated / elapsed if elapsed > 0 else float("inf")

    log.info(
        "throughput_measured",
        proposals=result.proposals_evaluated,
        seconds=round(elapsed, 3),
        proposals_per_second=round(rate, 1),
        target=TARGET_RATE,
        cases=suite.n_cases,
    )
    print(f"{rate:.1f} proposals/s")
    if rate < TARGET_RATE:
        log.warning("throughput_below_target", proposals_per_second=round(rate, 1))
    return 0 if rate >= args.floor else 1


if __name__ == "__main__":
    sys.exit(main())
