"""Exception hierarchy for the synthesizer.

Everything raised on purpose derives from ``SynthError`` so the CLI can turn
it into a one-line message and a nonzero exit code.
"""

from __future__ import annotations


class SynthError(Exception):
    """Base class for all synthesizer errors."""


class NetlistParseError(SynthError):
    """Raised when a netlist line cannot be parsed."""

    def __init__(self, line_no: int, message: str) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class SSAViolationError(SynthError):
    """Raised when a register is doubly driven or drives itself."""

    def __init__(self, register: int, message: str) -> None:
        self.register = register
        super().__init__(f"r{register} {message}")


class InvalidProgramError(SynthError):
    """Raised when a program with a live combinational loop is simulated."""

    def __init__(self, witness: list[int]) -> None:
        self.witness = witness
        cycle = " -> ".join(f"r{r}" for r in [*witness, witness[0]])
        super().__init__(f"combinational loop: {cycle}")


class InputBindingError(SynthError):
    """Raised when input bitstreams are missing or have the wrong length."""


class SequenceError(SynthError):
    """Raised for out-of-range SN values, bad LFSR widths or a zero LFSR state."""


class TargetSpecError(SynthError):
    """Raised when a target specification is inconsistent."""


class UnknownBenchmarkError(SynthError):
    """Raised when a benchmark name is not in the registry."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown benchmark {name!r}")


class SearchSpaceTooLargeError(SynthError):
    """Raised when exhaustive enumeration would exceed the configured limit."""

    def __init__(self, count: int, limit: int) -> None:
        self.count = count
        self.limit = limit
        super().__init__(
            f"search space has {count} candidates ({count:.3e}), limit is {limit}"
        )


class SpecFileError(SynthError):
    """Raised when a run-spec file is malformed; names the offending field."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")
