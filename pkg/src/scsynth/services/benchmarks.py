"""Benchmark registry, benchmark runs and SN-length sweeps.

Each benchmark pairs a target function with the input generation setup it is
synthesized under, the instruction count it is searched at and the absolute
error reported for it in the published results. A run passes when its best
cost stays within ``settings.BENCH_TOLERANCE`` of that reference error.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import TextIO

import structlog

from scsynth.config import settings
from scsynth.errors import InvalidProgramError, TargetSpecError, UnknownBenchmarkError
from scsynth.models import Program
from scsynth.services.bitgen import LFSR, SequenceKind
from scsynth.services.cost import (
    InputSetup,
    TargetFunction,
    TargetSpec,
    evaluate_cost,
    make_test_suite,
)
from scsynth.services.netlist import format_netlist, parse_netlist
from scsynth.services.synthesizer import SynthConfig, synthesize_chains
from scsynth.services.validity import live_inputs, strip_dead_code, validate

log = structlog.get_logger()

MIN_SWEEP_LENGTH = 8

# Divisor samples below this many grid steps are dropped from the division suite.
DIVISION_MIN_STEPS = 2


# ---------------------------------------------------------------------------
# Target functions
# ---------------------------------------------------------------------------

def scaled_add(x: float, y: float) -> float:
    return (x + y) / 2


def abs_difference(x: float, y: float) -> float:
    return abs(x - y)


def multiply(x: float, y: float) -> float:
    return x * y


@dataclass(frozen=True)
class Divide:
    """x / y, undefined for divisors below ``min_divisor``."""

    min_divisor: float

    def __call__(self, x: float, y: float) -> float | None:
        if y < self.min_divisor:
            return None
        return x / y


def divide_for_grid(grid: int) -> Divide:
    return Divide(DIVISION_MIN_STEPS / grid)


def scale_quarter(x: float) -> float:
    return x / 4


def scale_third(x: float) -> float:
    return x / 3


def scale_half(x: float) -> float:
    return x / 2


def scaled_relu(x: float) -> float:
    return max(0.5, x)


def square_root(x: float) -> float:
    return math.sqrt(x)


def sine(x: float) -> float:
    return (math.sin(2 * math.pi * x) + 1) / 2


def cosine(x: float) -> float:
    return (math.cos(2 * math.pi * x) + 1) / 2


def power(x: float, y: float) -> float:
    # 0 ** 0 == 1
    return x**y


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_CORRELATED = (InputSetup(corr_class=0), InputSetup(corr_class=0))
_UNCORRELATED_LFSR = (
    InputSetup(kind=LFSR, corr_class=0),
    InputSetup(kind=LFSR, corr_class=1),
)
_SINGLE = (InputSetup(),)


@dataclass(frozen=True)
class Benchmark:
    name: str
    formula: str
    function: TargetFunction
    inputs: tuple[InputSetup, ...]
    length: int
    reference_error: float
    reference_netlist: str | None = None
    # Builds the target for a given grid when its domain depends on the grid.
    grid_function: Callable[[int], TargetFunction] | None = None

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    def function_for(self, grid: int) -> TargetFunction:
        if self.grid_function is None:
            return self.function
        return self.grid_function(grid)

    def target_spec(self, grid: int | None = None, sn_length: int | None = None) -> TargetSpec:
        grid = settings.DEFAULT_GRID if grid is None else grid
        return TargetSpec(
            function=self.function_for(grid),
            inputs=self.inputs,
            grid=grid,
            sn_length=settings.DEFAULT_SN_LENGTH if sn_length is None else sn_length,
        )

    def reference_program(self) -> Program | None:
        if self.reference_netlist is None:
            return None
        return parse_netlist(self.reference_netlist)


def benchmark_registry() -> list[Benchmark]:
    """All benchmarks, in report order."""
    return [
        Benchmark(
            "scaled_adder", "(x + y) / 2", scaled_add, _UNCORRELATED_LFSR, 3, 0.027,
            "inputs 2\nXOR r0 r1 -> r2\nTFF r2 -> r3\nMUX r3 r0 r2 -> r4\noutput r4",
        ),
        Benchmark(
            "subtractor", "|x - y|", abs_difference, _CORRELATED, 1, 0.0,
            "inputs 2\nXOR r0 r1 -> r2\noutput r2",
        ),
        Benchmark(
            "uncorrelated_multiplier", "x * y", multiply, _UNCORRELATED_LFSR, 2, 0.021,
            "inputs 2\nDFF r1 -> r2\nAND r0 r2 -> r3\noutput r3",
        ),
        Benchmark(
            "division", "x / y", divide_for_grid(settings.DEFAULT_GRID), _CORRELATED, 2, 0.038,
            grid_function=divide_for_grid,
        ),
        Benchmark(
            "scale_quarter", "x / 4", scale_quarter, _SINGLE, 5, 0.0,
            "inputs 1\nTFF r0 -> r1\nAND r0 r1 -> r2\nTFF r2 -> r3\nAND r2 r3 -> r4\n"
            "PASS r4 -> r5\noutput r5",
        ),
        Benchmark("scale_third", "x / 3", scale_third, _SINGLE, 5, 0.0),
        Benchmark(
            "scale_half", "x / 2", scale_half, _SINGLE, 2, 0.0,
            "inputs 1\nTFF r0 -> r1\nAND r0 r1 -> r2\noutput r2",
        ),
        Benchmark("scaled_relu", "max(0.5, x)", scaled_relu, _SINGLE, 16, 0.0),
        Benchmark(
            "correlated_multiplier", "x * y", multiply, _CORRELATED, 4, 0.035
        ),
        Benchmark("sqrt", "sqrt(x)", square_root, _SINGLE, 5, 0.024),
        Benchmark("sine", "(sin(2 pi x) + 1) / 2", sine, _SINGLE, 8, 0.068),
        Benchmark(
            "exponentiation", "x ** y", power, _UNCORRELATED_LFSR, 7, 0.031
        ),
        Benchmark("cosine", "(cos(2 pi x) + 1) / 2", cosine, _SINGLE, 10, 0.15),
    ]


def get_benchmark(name: str) -> Benchmark:
    for bench in benchmark_registry():
        if bench.name == name:
            return bench
    raise UnknownBenchmarkError(name)


def correlation_discovery_spec(
    grid: int | None = None, sn_length: int | None = None
) -> TargetSpec:
    """|x - y| with x supplied twice: r0 in class 0, r1 (a copy) in class 1.

    y (r2) shares class 1 with the copy, so an exact circuit has to read r1.
    """
    return TargetSpec(
        function=abs_difference,
        inputs=(
            InputSetup(corr_class=0),
            InputSetup(corr_class=1, duplicate_of=0),
            InputSetup(corr_class=1),
        ),
        grid=settings.DEFAULT_GRID if grid is None else grid,
        sn_length=settings.DEFAULT_SN_LENGTH if sn_length is None else sn_length,
    )


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkReport:
    name: str
    length: int
    budget: int
    best_cost: float
    reference_error: float
    passed: bool
    netlist: str
    live_netlist: str
    live_inputs: tuple[int, ...]
    proposals: int
    terminated_by: str

    def as_row(self) -> dict[str, object]:
        return {
            "name": self.name,
            "I": self.length,
            "budget": self.budget,
            "best_cost": f"{self.best_cost:.6f}",
            "reference_error": self.reference_error,
            "pass": self.passed,
        }


REPORT_FIELDS = ["name", "I", "budget", "best_cost", "reference_error", "pass"]


def default_config(bench: Benchmark, **overrides: object) -> SynthConfig:
    """A ``SynthConfig`` sized for *bench*; keyword arguments override fields."""
    return SynthConfig(
        n_inputs=bench.n_inputs, program_length=bench.length, **overrides
    )


def run_benchmark(
    name: str,
    cfg: SynthConfig | None = None,
    chains: int = 1,
    grid: int | None = None,
    sn_length: int | None = None,
) -> BenchmarkReport:
    """Synthesize one benchmark and judge it against its reference error.

    Raises:
        UnknownBenchmarkError: *name* is not registered.
    """
    bench = get_benchmark(name)
    cfg = default_config(bench) if cfg is None else cfg
    suite = make_test_suite(bench.target_spec(grid, sn_length))
    result = synthesize_chains(cfg, suite, chains)
    passed = result.best_cost <= bench.reference_error + settings.BENCH_TOLERANCE
    log.info(
        "benchmark_finished",
        benchmark=name,
        best_cost=result.best_cost,
        reference_error=bench.reference_error,
        passed=passed,
        proposals=result.proposals_evaluated,
    )
    return BenchmarkReport(
        name=name,
        length=cfg.program_length,
        budget=cfg.budget,
        best_cost=result.best_cost,
        reference_error=bench.reference_error,
        passed=passed,
        netlist=format_netlist(result.best),
        live_netlist=format_netlist(strip_dead_code(result.best)),
        live_inputs=tuple(sorted(live_inputs(result.best))),
        proposals=result.proposals_evaluated,
        terminated_by=result.terminated_by.value,
    )


def _with_kind(spec: TargetSpec, kind: SequenceKind) -> TargetSpec:
    return dataclasses.replace(
        spec, inputs=tuple(setup.model_copy(update={"kind": kind}) for setup in spec.inputs)
    )


def sweep_lengths(
    program: Program,
    spec: TargetSpec,
    lengths: list[int],
    kind: SequenceKind | None = None,
) -> list[tuple[int, float]]:
    """Cost of one circuit on suites regenerated at each SN length.

    With *kind* given, every input is regenerated from that sequence family
    instead of its own. Rows come back in ascending N.

    Raises:
        InvalidProgramError: *program* has a live combinational loop.
        TargetSpecError: a length below 8.
    """
    report = validate(program)
    if not report.valid:
        raise InvalidProgramError(list(report.loop_witness or ()))
    if any(n < MIN_SWEEP_LENGTH for n in lengths):
        raise TargetSpecError(f"sweep lengths must be at least {MIN_SWEEP_LENGTH}")
    if kind is not None:
        spec = _with_kind(spec, kind)
    rows = []
    for n in sorted(set(lengths)):
        suite = make_test_suite(dataclasses.replace(spec, sn_length=n))
        rows.append((n, evaluate_cost(program, suite)))
    return rows


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def write_report_csv(reports: list[BenchmarkReport], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for report in reports:
        writer.writerow(report.as_row())


def write_sweep_csv(rows: list[tuple[int, float]], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["N", "error"])
    for n, error in rows:
        writer.writerow([n, f"{error:.6f}"])
