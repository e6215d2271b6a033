"""``scsynth enum`` -- exhaustive search baseline."""

from __future__ import annotations

import argparse

from scsynth.commands.specfile import load_spec
from scsynth.config import settings
from scsynth.services.cost import make_test_suite
from scsynth.services.exhaustive import count_candidates, enumerate_best
from scsynth.services.netlist import format_netlist


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("enum", help="enumerate every program of a length")
    parser.add_argument("specfile")
    parser.add_argument("--length", type=int, help="instruction count (default: spec length)")
    parser.add_argument("--limit", type=int, default=settings.ENUM_LIMIT)
    parser.add_argument(
        "--reduced", action="store_true", help="skip operand-order and slot-order duplicates"
    )
    parser.add_argument("--workers", type=int, default=1)


def run(args: argparse.Namespace) -> int:
    spec = load_spec(args.specfile)
    length = args.length if args.length is not None else spec.program_length
    print(f"candidates {count_candidates(spec.n_inputs, length)}")
    suite = make_test_suite(spec.to_target_spec())
    result = enumerate_best(
        suite,
        spec.n_inputs,
        length,
        limit=args.limit,
        reduced=args.reduced,
        workers=args.workers,
    )
    print(format_netlist(result.program))
    print(f"cost {result.cost:.6f}")
    print(f"evaluated {result.evaluated} skipped {result.skipped}")
    return 0
