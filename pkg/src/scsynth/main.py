"""Command-line entry point: ``scsynth <command> ...``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable

import structlog
from pydantic import ValidationError

from scsynth.commands import bench, enumeration, simulate, sweep, synth
from scsynth.config import settings
from scsynth.errors import SynthError
from scsynth.log_setup import configure_logging

log = structlog.get_logger()

# Static dispatch table: sub-command name -> runner.
COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "synth": synth.run,
    "simulate": simulate.run,
    "bench": bench.run,
    "sweep": sweep.run,
    "enum": enumeration.run,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scsynth",
        description="Stochastic synthesis of stochastic-computing circuits.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    synth.register(subparsers)
    simulate.register(subparsers)
    bench.register(subparsers)
    sweep.register(subparsers)
    enumeration.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    log.debug("command_started", command=args.command, env=settings.APP_ENV)
    try:
        return COMMANDS[args.command](args)
    except (SynthError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
