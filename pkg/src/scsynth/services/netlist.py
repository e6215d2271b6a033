"""Netlist text format -- parse and print programs.

Format (UTF-8, one statement per line, ``#`` starts a comment)::

    inputs 2
    XOR r0 r1 -> r2
    output r2

Instruction lines may appear in any order; each is placed in the slot its
destination register implies. ``format_netlist`` always emits slot order, so
``parse_netlist(format_netlist(p)) == p``.
"""

from __future__ import annotations

import re

from scsynth.errors import NetlistParseError, SSAViolationError
from scsynth.models import Instruction, Opcode, Program
from scsynth.services.validity import dead_code_eliminate

_HEADER = re.compile(r"^inputs\s+([0-9]+)$")
_REGISTER = re.compile(r"^r([0-9]+)$")
_INSTRUCTION = re.compile(r"^(?P<op>[A-Za-z]+)\s+(?P<ins>.*?)\s*->\s*(?P<dst>\S+)$")


def _register(token: str, line_no: int) -> int:
    match = _REGISTER.match(token)
    if match is None:
        raise NetlistParseError(line_no, f"expected a register like r3, got {token!r}")
    return int(match.group(1))


def parse_netlist(text: str) -> Program:
    """Parse netlist *text* into a ``Program``.

    Raises:
        NetlistParseError: malformed lines, out-of-range registers, missing
            header/footer, or an output other than the last slot.
        SSAViolationError: a register driven twice, an input register used as
            a destination, or a live combinational gate reading its own output.
    """
    n_inputs: int | None = None
    output: tuple[int, int] | None = None
    parsed: list[tuple[int, Instruction]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if n_inputs is None:
            header = _HEADER.match(line)
            if header is None:
                raise NetlistParseError(line_no, "expected header 'inputs <n>'")
            n_inputs = int(header.group(1))
            if n_inputs < 1:
                raise NetlistParseError(line_no, "a circuit needs at least one input")
            continue

        if output is not None:
            raise NetlistParseError(line_no, "nothing may follow the output line")

        if line.startswith("output"):
            parts = line.split()
            if len(parts) != 2:
                raise NetlistParseError(line_no, "expected 'output r<k>'")
            output = (line_no, _register(parts[1], line_no))
            continue

        match = _INSTRUCTION.match(line)
        if match is None:
            raise NetlistParseError(line_no, f"cannot parse instruction {line!r}")
        try:
            opcode = Opcode(match.group("op").upper())
        except ValueError:
            raise NetlistParseError(
                line_no, f"unknown opcode {match.group('op')!r}"
            ) from None
        inputs = tuple(_register(tok, line_no) for tok in match.group("ins").split())
        if len(inputs) != opcode.arity:
            raise NetlistParseError(
                line_no,
                f"{opcode.value} takes {opcode.arity} inputs, got {len(inputs)}",
            )
        dst = _register(match.group("dst"), line_no)
        parsed.append((line_no, Instruction(opcode, inputs, dst)))

    if n_inputs is None:
        raise NetlistParseError(0, "empty netlist")
    if output is None:
        raise NetlistParseError(0, "missing 'output r<k>' line")
    if not parsed:
        raise NetlistParseError(output[0], "a circuit needs at least one instruction")

    pool = n_inputs + len(parsed)
    slots: dict[int, Instruction] = {}
    for line_no, ins in parsed:
        if ins.dst < n_inputs:
            raise SSAViolationError(ins.dst, "is an input register and cannot be driven")
        for reg in (*ins.inputs, ins.dst):
            if reg >= pool:
                raise NetlistParseError(
                    line_no, f"r{reg} is outside the register pool r0..r{pool - 1}"
                )
        if ins.dst - n_inputs in slots:
            raise SSAViolationError(ins.dst, "is doubly driven")
        slots[ins.dst - n_inputs] = ins

    out_line, out_reg = output
    if out_reg != pool - 1:
        raise NetlistParseError(
            out_line, f"output must be the last slot's destination r{pool - 1}"
        )

    program = Program(n_inputs, tuple(slots[k] for k in range(len(parsed))))
    for k in sorted(dead_code_eliminate(program)):
        ins = program.instructions[k]
        if not ins.opcode.is_sequential and ins.dst in ins.inputs:
            raise SSAViolationError(ins.dst, "is doubly driven and self-driven")
    return program


def format_netlist(program: Program) -> str:
    """Render *program* in canonical slot order (no trailing newline)."""
    lines = [f"inputs {program.n_inputs}"]
    for ins in program.instructions:
        operands = " ".join(f"r{r}" for r in ins.inputs)
        lines.append(f"{ins.opcode.value} {operands} -> r{ins.dst}")
    lines.append(f"output r{program.output}")
    return "\n".join(lines)
