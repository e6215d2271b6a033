"""Run-spec files: a flat ``key = value`` text format.

Example::

    # correlated subtractor
    target = subtractor
    n_inputs = 2
    sn_length = 256
    input.0.kind = vdc
    input.0.class = 0
    input.1.class = 0
    length = 1
    budget = 1000000

``target`` names a registered benchmark or is ``polynomial`` together with
``coefficients = c0, c1, ...`` (evaluated in the first primary input).
Per-input keys are ``kind``, ``seed``, ``class`` and ``duplicate_of``.
``none`` clears an optional value. Unknown keys are rejected.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from scsynth.config import settings
from scsynth.errors import SpecFileError, UnknownBenchmarkError
from scsynth.services.benchmarks import Benchmark, get_benchmark
from scsynth.services.bitgen import SequenceKind, SequenceTag
from scsynth.services.cost import InputSetup, TargetSpec
from scsynth.services.synthesizer import SynthConfig

POLYNOMIAL = "polynomial"

_INPUT_KEY = re.compile(r"^input\.(\d+)\.(\w+)$")


class InputEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    kind: SequenceTag = SequenceTag.VAN_DER_CORPUT
    seed: int = Field(default=0, ge=0)
    corr_class: int = Field(default=0, ge=0, alias="class")
    duplicate_of: int | None = Field(default=None, ge=0)

    def to_setup(self) -> InputSetup:
        return InputSetup(
            kind=SequenceKind(tag=self.kind, seed=self.seed),
            corr_class=self.corr_class,
            duplicate_of=self.duplicate_of,
        )


class RunSpecFile(BaseModel):
    """Everything one synthesis run needs, as read from a spec file."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    target: str
    coefficients: list[float] | None = None
    n_inputs: int = Field(ge=1)
    sn_length: int = Field(ge=1)
    grid: int = Field(default_factory=lambda: settings.DEFAULT_GRID, ge=2)
    inputs: list[InputEntry] = Field(default_factory=list)
    length: int | None = Field(default=None, ge=1)
    budget: int = Field(default_factory=lambda: settings.DEFAULT_BUDGET, ge=1)
    beta: float = Field(default_factory=lambda: settings.DEFAULT_BETA, gt=0)
    seed: int = Field(default=0, ge=0)
    chains: int = Field(default_factory=lambda: settings.DEFAULT_CHAINS, ge=1)
    early_stop_cost: float | None = Field(
        default_factory=lambda: settings.DEFAULT_EARLY_STOP_COST
    )
    restart_after_stall: int | None = Field(default=None, ge=1)

    @property
    def benchmark(self) -> Benchmark | None:
        if self.target == POLYNOMIAL:
            return None
        return get_benchmark(self.target)

    @property
    def program_length(self) -> int:
        if self.length is not None:
            return self.length
        bench = self.benchmark
        if bench is None:
            raise SpecFileError("length", "required for polynomial targets")
        return bench.length

    def to_target_spec(self) -> TargetSpec:
        return TargetSpec(
            function=_target_function(self),
            inputs=tuple(entry.to_setup() for entry in self.inputs),
            grid=self.grid,
            sn_length=self.sn_length,
        )

    def to_synth_config(self) -> SynthConfig:
        return SynthConfig(
            n_inputs=self.n_inputs,
            program_length=self.program_length,
            beta=self.beta,
            budget=self.budget,
            seed=self.seed,
            early_stop_cost=self.early_stop_cost,
            restart_after_stall=self.restart_after_stall,
        )


class Polynomial:
    """``c0 + c1 * x + c2 * x**2 + ...`` in the first argument."""

    def __init__(self, coefficients: list[float]) -> None:
        self.coefficients = np.asarray(coefficients, dtype=np.float64)

    def __call__(self, x: float, *_: float) -> float:
        return float(np.polynomial.polynomial.polyval(x, self.coefficients))


def _target_function(run: RunSpecFile):
    if run.target == POLYNOMIAL:
        if not run.coefficients:
            raise SpecFileError("coefficients", "required for polynomial targets")
        return Polynomial(run.coefficients)
    if run.coefficients is not None:
        raise SpecFileError("coefficients", "only allowed for polynomial targets")
    bench = run.benchmark
    primaries = sum(1 for entry in run.inputs if entry.duplicate_of is None)
    expected = sum(1 for setup in bench.inputs if setup.duplicate_of is None)
    if primaries != expected:
        raise SpecFileError(
            "n_inputs", f"{run.target} takes {expected} primary inputs, got {primaries}"
        )
    return bench.function_for(run.grid)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def _value(raw: str) -> str | None:
    return None if raw.lower() == "none" else raw


def _raw_fields(text: str) -> tuple[dict[str, object], dict[int, dict[str, str | None]]]:
    fields: dict[str, object] = {}
    inputs: dict[int, dict[str, str | None]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise SpecFileError(f"line {line_no}", "expected 'key = value'")
        match = _INPUT_KEY.match(key)
        if match is not None:
            entry = inputs.setdefault(int(match.group(1)), {})
            if match.group(2) in entry:
                raise SpecFileError(key, "given twice")
            entry[match.group(2)] = _value(value)
            continue
        if key in fields:
            raise SpecFileError(key, "given twice")
        if key == "coefficients":
            fields[key] = [c.strip() for c in value.split(",") if c.strip()]
        else:
            fields[key] = _value(value)
    return fields, inputs


def _resolve_inputs(
    fields: dict[str, object], raw_inputs: dict[int, dict[str, str | None]]
) -> list[dict[str, object]]:
    try:
        n_inputs = int(str(fields["n_inputs"]))
    except (KeyError, ValueError):
        # Left for pydantic to report.
        return [dict(v) for _, v in sorted(raw_inputs.items())]
    for index in raw_inputs:
        if index >= n_inputs:
            raise SpecFileError(f"input.{index}", f"only {n_inputs} inputs declared")

    defaults: tuple[InputSetup, ...] = ()
    target = fields.get("target")
    if isinstance(target, str) and target != POLYNOMIAL:
        try:
            bench = get_benchmark(target)
        except UnknownBenchmarkError as exc:
            raise SpecFileError("target", str(exc)) from None
        if bench.n_inputs == n_inputs:
            defaults = bench.inputs

    resolved = []
    for index in range(n_inputs):
        given = raw_inputs.get(index)
        if given is None and defaults:
            setup = defaults[index]
            resolved.append(
                {
                    "kind": setup.kind.tag,
                    "seed": setup.kind.seed,
                    "class": setup.corr_class,
                    "duplicate_of": setup.duplicate_of,
                }
            )
        else:
            resolved.append(dict(given or {}))
    return resolved


def parse_spec(text: str) -> RunSpecFile:
    """Parse spec-file *text*.

    Raises:
        SpecFileError: naming the offending key for any malformed,
            unknown, missing or out-of-range field.
    """
    fields, raw_inputs = _raw_fields(text)
    fields["inputs"] = _resolve_inputs(fields, raw_inputs)
    try:
        run = RunSpecFile.model_validate(fields)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = [str(part) for part in error["loc"]]
        if len(loc) >= 3 and loc[0] == "inputs":
            loc = ["input", *loc[1:]]
        raise SpecFileError(".".join(loc) or "spec", error["msg"]) from None
    if run.target != POLYNOMIAL:
        try:
            get_benchmark(run.target)
        except UnknownBenchmarkError as exc:
            raise SpecFileError("target", str(exc)) from None
    return run


def load_spec(path: str | Path) -> RunSpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError("spec", f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def dump_spec(run: RunSpecFile) -> str:
    """Fully resolved spec text; ``parse_spec(dump_spec(r)) == r``."""

    def fmt(value: object) -> str:
        if value is None:
            return "none"
        return repr(value) if isinstance(value, float) else str(value)

    lines = [f"target = {run.target}"]
    if run.coefficients is not None:
        lines.append("coefficients = " + ", ".join(fmt(c) for c in run.coefficients))
    lines += [
        f"n_inputs = {run.n_inputs}",
        f"sn_length = {run.sn_length}",
        f"grid = {run.grid}",
    ]
    for index, entry in enumerate(run.inputs):
        lines += [
            f"input.{index}.kind = {entry.kind.value}",
            f"input.{index}.seed = {entry.seed}",
            f"input.{index}.class = {entry.corr_class}",
            f"input.{index}.duplicate_of = {fmt(entry.duplicate_of)}",
        ]
    lines += [
        f"length = {fmt(run.length)}",
        f"budget = {run.budget}",
        f"beta = {fmt(run.beta)}",
        f"seed = {run.seed}",
        f"chains = {run.chains}",
        f"early_stop_cost = {fmt(run.early_stop_cost)}",
        f"restart_after_stall = {fmt(run.restart_after_stall)}",
    ]
    return "\n".join(lines) + "\n"
