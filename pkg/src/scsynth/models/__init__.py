"""Domain models package -- re-exports the circuit value types."""

from scsynth.models.circuit import (
    ARITY,
    ARITY_GROUPS,
    OPCODES,
    SEQUENTIAL,
    Instruction,
    Opcode,
    Program,
    random_instruction,
    random_program,
)

__all__ = [
    "ARITY",
    "ARITY_GROUPS",
    "OPCODES",
    "SEQUENTIAL",
    "Instruction",
    "Opcode",
    "Program",
    "random_instruction",
    "random_program",
]
