"""Test-suite construction and program cost.

A ``TargetSpec`` describes the function to synthesize and how each circuit
input is generated. ``make_test_suite`` samples a Cartesian grid over the
primary inputs, generates every input bitstream, and computes the expected
output from the *realized* input values (what the generated streams actually
decode to), so SNG quantization does not raise the cost floor. Duplicate
inputs repeat their primary's value under their own correlation class.

The cost of a program is the mean absolute error between decoded output and
expected value over all cases; invalid programs cost exactly 1.0.
"""

from __future__ import annotations

import itertools
import math
from collections import OrderedDict
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import structlog
from pydantic import BaseModel, Field

from scsynth.config import settings
from scsynth.errors import TargetSpecError
from scsynth.models import Program
from scsynth.services.bitgen import (
    VAN_DER_CORPUT,
    Bitstream,
    SequenceKind,
    decode_unipolar,
    generate_bits,
)
from scsynth.services.simulator import compile_program, run
from scsynth.services.validity import dead_code_eliminate

log = structlog.get_logger()

TargetFunction = Callable[..., float | None]

_QUANTIZE_EPS = 1e-9


class OutputQuantization(str, Enum):
    """How expected values are snapped to the output resolution 1/N."""

    FLOOR = "floor"
    NONE = "none"


class InputSetup(BaseModel, frozen=True, extra="forbid"):
    """How one circuit input is generated."""

    kind: SequenceKind = VAN_DER_CORPUT
    corr_class: int = Field(default=0, ge=0)
    duplicate_of: int | None = Field(default=None, ge=0)


@dataclass(frozen=True)
class TargetSpec:
    """Target function, input generation setup and sampling parameters.

    ``function`` takes one argument per primary (non-duplicate) input and
    returns the target value, or ``None`` / raises ``ZeroDivisionError`` or
    ``ValueError`` where it is undefined.
    """

    function: TargetFunction
    inputs: tuple[InputSetup, ...]
    grid: int = 16
    sn_length: int = 256
    output_quantization: OutputQuantization = OutputQuantization.FLOOR

    def __post_init__(self) -> None:
        if not self.inputs:
            raise TargetSpecError("a target needs at least one input")
        if self.grid < 2:
            raise TargetSpecError("grid must be at least 2")
        if self.sn_length < 1:
            raise TargetSpecError("SN length must be at least 1")
        for i, setup in enumerate(self.inputs):
            if setup.duplicate_of is None:
                continue
            primary_index = setup.duplicate_of
            if primary_index >= len(self.inputs) or primary_index == i:
                raise TargetSpecError(f"input {i} duplicates a non-existent input")
            primary = self.inputs[primary_index]
            if primary.duplicate_of is not None:
                raise TargetSpecError(f"input {i} duplicates another duplicate")
            if primary.corr_class == setup.corr_class and primary.kind == setup.kind:
                raise TargetSpecError(
                    f"input {i} duplicates input {primary_index} under the same class"
                )

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def primaries(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.inputs) if s.duplicate_of is None)


@dataclass(frozen=True)
class TestCase:
    """One set of input bindings and its expected output value."""

    __test__ = False

    inputs: dict[int, Bitstream]
    expected: float


@dataclass(frozen=True)
class TestSuite:
    """Stacked input streams ``(n_inputs, N, cases)`` plus expected values."""

    __test__ = False

    streams: np.ndarray
    expected: np.ndarray
    sn_length: int
    excluded: int = 0
    grid_values: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def __post_init__(self) -> None:
        self.streams.setflags(write=False)
        self.expected.setflags(write=False)

    @property
    def n_inputs(self) -> int:
        return int(self.streams.shape[0])

    @property
    def n_cases(self) -> int:
        return int(self.expected.size)

    @property
    def cases(self) -> Iterator[TestCase]:
        for c in range(self.n_cases):
            yield TestCase(
                inputs={r: Bitstream(self.streams[r, :, c].copy()) for r in range(self.n_inputs)},
                expected=float(self.expected[c]),
            )

    def repeated(self, times: int) -> TestSuite:
        """The same cases listed *times* over."""
        return TestSuite(
            streams=np.tile(self.streams, (1, 1, times)),
            expected=np.tile(self.expected, times),
            sn_length=self.sn_length,
            excluded=self.excluded * times,
        )


def _quantize(value: float, spec: TargetSpec) -> float:
    value = min(1.0, max(0.0, value))
    if spec.output_quantization is OutputQuantization.FLOOR:
        n = spec.sn_length
        return math.floor(value * n + _QUANTIZE_EPS) / n
    return value


def make_test_suite(spec: TargetSpec) -> TestSuite:
    """Sample the grid, generate input streams and expected outputs.

    Grid points where the target is undefined are dropped and counted in
    ``TestSuite.excluded``.
    """
    primaries = spec.primaries
    axis = np.linspace(0.0, 1.0, spec.grid)
    points = np.array(list(itertools.product(axis, repeat=len(primaries))))

    n = spec.sn_length
    streams = np.empty((spec.n_inputs, n, len(points)), dtype=bool)
    column = {p: j for j, p in enumerate(primaries)}
    for i, setup in enumerate(spec.inputs):
        source = i if setup.duplicate_of is None else setup.duplicate_of
        streams[i] = generate_bits(points[:, column[source]], n, setup.kind, setup.corr_class)

    realized = decode_unipolar(streams[list(primaries)].transpose(1, 0, 2))
    keep: list[int] = []
    expected: list[float] = []
    for c in range(len(points)):
        try:
            value = spec.function(*(float(v) for v in realized[:, c]))
        except (ZeroDivisionError, ValueError):
            value = None
        if value is None or not math.isfinite(value):
            continue
        keep.append(c)
        expected.append(_quantize(float(value), spec))

    excluded = len(points) - len(keep)
    if not keep:
        raise TargetSpecError("the target is undefined on every grid point")
    log.info("suite_built", cases=len(keep), excluded=excluded, sn_length=n, grid=spec.grid)
    return TestSuite(
        streams=np.ascontiguousarray(streams[:, :, keep]),
        expected=np.array(expected, dtype=np.float64),
        sn_length=n,
        excluded=excluded,
        grid_values=points[keep],
    )


def evaluate_cost(program: Program, suite: TestSuite) -> float:
    """Mean absolute error over the suite; 1.0 for invalid programs."""
    circuit = compile_program(program)
    if not circuit.valid:
        return 1.0
    outputs = decode_unipolar(run(circuit, suite.streams))
    return float(np.mean(np.abs(outputs - suite.expected)))


def live_key(program: Program) -> tuple:
    """Identity of the live sub-circuit; programs with equal keys cost the same."""
    live = sorted(dead_code_eliminate(program))
    return (program.n_inputs, program.length, tuple(program.instructions[k] for k in live))


class CostFunction:
    """``evaluate_cost`` bound to one suite, memoized on the live sub-circuit."""

    def __init__(self, suite: TestSuite, cache_size: int | None = None) -> None:
        self.suite = suite
        self.cache_size = settings.COST_CACHE_SIZE if cache_size is None else cache_size
        self._cache: OrderedDict[tuple, float] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def __call__(self, program: Program) -> float:
        if self.cache_size <= 0:
            return evaluate_cost(program, self.suite)
        key = live_key(program)
        cached = self._cache.get(key)
        if cached is not None:
            self.hits += 1
            self._cache.move_to_end(key)
            return cached
        self.misses += 1
        cost = evaluate_cost(program, self.suite)
        self._cache[key] = cost
        if len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)
        return cost
