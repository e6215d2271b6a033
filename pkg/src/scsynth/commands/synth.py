"""``scsynth synth`` -- run the stochastic search from a spec file."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import structlog

from scsynth.commands.specfile import RunSpecFile, dump_spec, load_spec
from scsynth.services.cost import make_test_suite
from scsynth.services.netlist import format_netlist
from scsynth.services.synthesizer import SynthesisResult, synthesize_chains
from scsynth.services.validity import live_inputs, strip_dead_code

log = structlog.get_logger()

# Flags that override the spec file when given.
OVERRIDES = ("seed", "budget", "beta", "chains")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("synth", help="synthesize a circuit for a spec file")
    parser.add_argument("specfile")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--chains", type=int)
    parser.add_argument("--out", default="synth_out", help="artifact directory")
    parser.add_argument(
        "--dump-config",
        action="store_true",
        help="print the fully resolved spec and exit",
    )


def resolve(args: argparse.Namespace) -> RunSpecFile:
    """The spec file with command-line overrides applied and re-validated."""
    run = load_spec(args.specfile)
    updates = {name: getattr(args, name) for name in OVERRIDES if getattr(args, name) is not None}
    if not updates:
        return run
    return RunSpecFile.model_validate({**run.model_dump(by_alias=True), **updates})


def _write_artifacts(out: Path, result: SynthesisResult) -> None:
    out.mkdir(parents=True, exist_ok=True)
    live = strip_dead_code(result.best)
    (out / "best.net").write_text(format_netlist(result.best) + "\n", encoding="utf-8")
    (out / "best.live.net").write_text(format_netlist(live) + "\n", encoding="utf-8")

    with (out / "trajectory.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["proposal", "best_cost"])
        for proposal, cost in result.trajectory:
            writer.writerow([proposal, f"{cost:.6f}"])

    with (out / "run.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerow(["best_cost", f"{result.best_cost:.6f}"])
        writer.writerow(["proposals", result.proposals_evaluated])
        writer.writerow(["accepted", result.accepted])
        writer.writerow(["acceptance_rate", f"{result.acceptance_rate:.6f}"])
        writer.writerow(["restarts", result.restarts])
        writer.writerow(["terminated_by", result.terminated_by.value])
        writer.writerow(["chain", result.chain])
        writer.writerow(["live_instructions", live.length])
        writer.writerow(
            ["live_inputs", " ".join(f"r{r}" for r in sorted(live_inputs(result.best)))]
        )


def run(args: argparse.Namespace) -> int:
    spec = resolve(args)
    if args.dump_config:
        sys.stdout.write(dump_spec(spec))
        return 0

    suite = make_test_suite(spec.to_target_spec())
    result = synthesize_chains(spec.to_synth_config(), suite, spec.chains)
    out = Path(args.out)
    _write_artifacts(out, result)
    log.info("artifacts_written", out=str(out), best_cost=result.best_cost)

    print(format_netlist(result.best))
    print(f"best_cost {result.best_cost:.6f}")
    return 0
