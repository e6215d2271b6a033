"""``scsynth sweep`` -- re-evaluate a netlist across SN lengths."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from scsynth.commands.specfile import load_spec
from scsynth.services.benchmarks import sweep_lengths, write_sweep_csv
from scsynth.services.bitgen import SequenceKind, SequenceTag
from scsynth.services.netlist import parse_netlist


def _lengths(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sweep", help="error of a netlist across SN lengths")
    parser.add_argument("netlist")
    parser.add_argument("specfile")
    parser.add_argument("--lengths", type=_lengths, default=[64, 256, 1024])
    parser.add_argument(
        "--kind",
        choices=[t.value for t in SequenceTag],
        help="regenerate every input from this sequence family",
    )


def run(args: argparse.Namespace) -> int:
    program = parse_netlist(Path(args.netlist).read_text(encoding="utf-8"))
    spec = load_spec(args.specfile).to_target_spec()
    kind = SequenceKind(tag=SequenceTag(args.kind)) if args.kind else None
    rows = sweep_lengths(program, spec, args.lengths, kind=kind)
    write_sweep_csv(rows, sys.stdout)
    return 0
