"""``scsynth simulate`` -- run a netlist on generated or explicit bitstreams."""

from __future__ import annotations

import argparse
from pathlib import Path

from scsynth.config import settings
from scsynth.errors import InputBindingError
from scsynth.services.bitgen import (
    Bitstream,
    SequenceKind,
    SequenceTag,
    decode_bipolar,
    decode_unipolar,
    generate_sn,
)
from scsynth.services.netlist import parse_netlist
from scsynth.services.simulator import simulate


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("simulate", help="simulate a netlist")
    parser.add_argument("netlist", help="netlist file")
    parser.add_argument("values", nargs="*", type=float, help="one value per input")
    parser.add_argument(
        "--bits", nargs="+", metavar="BITS", help="explicit input bitstreams, e.g. 11101110"
    )
    parser.add_argument(
        "--kind", choices=[t.value for t in SequenceTag], default=SequenceTag.VAN_DER_CORPUT.value
    )
    parser.add_argument("--seed", type=int, default=0, help="sequence seed / phase")
    parser.add_argument(
        "--classes", type=_int_list, help="comma-separated correlation class per input"
    )
    parser.add_argument("--n", type=int, default=settings.DEFAULT_SN_LENGTH, help="SN length")
    parser.add_argument("--bipolar", action="store_true", help="also print the bipolar value")
    parser.add_argument("--dump", action="store_true", help="print the output bitstream")


def _bindings(args: argparse.Namespace, n_inputs: int) -> tuple[dict[int, Bitstream], int]:
    if args.bits:
        if args.values:
            raise InputBindingError("give either values or --bits, not both")
        streams = [Bitstream.from_string(b) for b in args.bits]
        if len(streams) != n_inputs:
            raise InputBindingError(f"netlist has {n_inputs} inputs, got {len(streams)} streams")
        return dict(enumerate(streams)), streams[0].length

    if len(args.values) != n_inputs:
        raise InputBindingError(f"netlist has {n_inputs} inputs, got {len(args.values)} values")
    classes = args.classes or [0] * n_inputs
    if len(classes) != n_inputs:
        raise InputBindingError(f"netlist has {n_inputs} inputs, got {len(classes)} classes")
    kind = SequenceKind(tag=SequenceTag(args.kind), seed=args.seed)
    return {
        reg: generate_sn(value, args.n, kind, corr_class)
        for reg, (value, corr_class) in enumerate(zip(args.values, classes))
    }, args.n


def run(args: argparse.Namespace) -> int:
    program = parse_netlist(Path(args.netlist).read_text(encoding="utf-8"))
    inputs, length = _bindings(args, program.n_inputs)
    output = simulate(program, inputs, length)
    print(decode_unipolar(output))
    if args.bipolar:
        print(decode_bipolar(output))
    if args.dump:
        print(output)
    return 0
