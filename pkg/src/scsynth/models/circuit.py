"""Hardware program representation.

A program is a fixed number of instruction slots over a register file.
Registers ``r0 .. r{n_inputs-1}`` are circuit inputs; slot ``k`` always drives
register ``r{n_inputs + k}`` (single static assignment by construction), and
the circuit output is the destination of the last slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Opcode(str, Enum):
    """Gate and flip-flop primitives available to the synthesizer."""

    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    NOT = "NOT"
    PASS = "PASS"
    DFF = "DFF"
    TFF = "TFF"
    MUX = "MUX"

    @property
    def arity(self) -> int:
        return ARITY[self]

    @property
    def is_sequential(self) -> bool:
        return self in SEQUENTIAL


ARITY: dict[Opcode, int] = {
    Opcode.AND: 2,
    Opcode.OR: 2,
    Opcode.XOR: 2,
    Opcode.NOT: 1,
    Opcode.PASS: 1,
    Opcode.DFF: 1,
    Opcode.TFF: 1,
    Opcode.MUX: 3,
}

SEQUENTIAL: frozenset[Opcode] = frozenset({Opcode.DFF, Opcode.TFF})

# Stable ordering used for random draws and enumeration.
OPCODES: tuple[Opcode, ...] = tuple(Opcode)

# Opcodes grouped by arity, for the replace-opcode rewrite.
ARITY_GROUPS: dict[int, tuple[Opcode, ...]] = {
    arity: tuple(op for op in OPCODES if op.arity == arity) for arity in (1, 2, 3)
}


@dataclass(frozen=True, slots=True)
class Instruction:
    """One gate: ``opcode inputs -> dst``.

    For MUX the inputs are ``(src, trg, sel)``: the output is ``src`` when
    ``sel`` is 1, else ``trg``.
    """

    opcode: Opcode
    inputs: tuple[int, ...]
    dst: int

    def __post_init__(self) -> None:
        if len(self.inputs) != self.opcode.arity:
            raise ValueError(
                f"{self.opcode.value} takes {self.opcode.arity} inputs, "
                f"got {len(self.inputs)}"
            )


@dataclass(frozen=True, slots=True)
class Program:
    """A fixed-length list of instructions; the unit of search."""

    n_inputs: int
    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        for k, ins in enumerate(self.instructions):
            if ins.dst != self.n_inputs + k:
                raise ValueError(
                    f"slot {k} must drive r{self.n_inputs + k}, not r{ins.dst}"
                )
            for reg in ins.inputs:
                if not 0 <= reg < self.pool_size:
                    raise ValueError(f"slot {k} reads r{reg}, outside the register pool")

    @property
    def length(self) -> int:
        return len(self.instructions)

    @property
    def pool_size(self) -> int:
        return self.n_inputs + len(self.instructions)

    @property
    def output(self) -> int:
        return self.n_inputs + len(self.instructions) - 1

    def slot_of(self, register: int) -> int | None:
        """Slot index driving *register*, or ``None`` for input registers."""
        if register < self.n_inputs:
            return None
        return register - self.n_inputs

    def replace(self, slot: int, instruction: Instruction) -> Program:
        """Return a copy with one slot swapped out."""
        instructions = list(self.instructions)
        instructions[slot] = instruction
        return Program(self.n_inputs, tuple(instructions))


def random_instruction(pool: int, dst: int, rng: np.random.Generator) -> Instruction:
    """Draw a uniformly random opcode and operands from registers ``0 .. pool-1``."""
    opcode = OPCODES[int(rng.integers(len(OPCODES)))]
    inputs = tuple(int(r) for r in rng.integers(pool, size=opcode.arity))
    return Instruction(opcode, inputs, dst)


def random_program(n_inputs: int, length: int, rng: np.random.Generator) -> Program:
    """Generate a random program of *length* slots.

    The result may contain combinational loops; validity is judged later.
    """
    pool = n_inputs + length
    return Program(
        n_inputs,
        tuple(random_instruction(pool, n_inputs + k, rng) for k in range(length)),
    )
