"""Executor functions for each rewrite rule.

Every executor has the signature:
    (program: Program, rng: numpy.random.Generator) -> Program

Executors never touch destination registers, so every proposal keeps the
single-static-assignment slot scheme.
"""

from __future__ import annotations

import numpy as np

from scsynth.models import ARITY_GROUPS, Instruction, Program, random_instruction, random_program


def execute_replace_operand(program: Program, rng: np.random.Generator) -> Program:
    """Point one input operand of a random slot at a random register."""
    slot = int(rng.integers(program.length))
    ins = program.instructions[slot]
    position = int(rng.integers(len(ins.inputs)))
    inputs = list(ins.inputs)
    inputs[position] = int(rng.integers(program.pool_size))
    return program.replace(slot, Instruction(ins.opcode, tuple(inputs), ins.dst))


def execute_replace_opcode(program: Program, rng: np.random.Generator) -> Program:
    """Swap a random slot's opcode for one of the same arity (possibly itself)."""
    slot = int(rng.integers(program.length))
    ins = program.instructions[slot]
    group = ARITY_GROUPS[ins.opcode.arity]
    opcode = group[int(rng.integers(len(group)))]
    return program.replace(slot, Instruction(opcode, ins.inputs, ins.dst))


def execute_replace_instruction(program: Program, rng: np.random.Generator) -> Program:
    """Regenerate a random slot's opcode and operands; its destination stays."""
    slot = int(rng.integers(program.length))
    dst = program.instructions[slot].dst
    return program.replace(slot, random_instruction(program.pool_size, dst, rng))


def swap_operands(program: Program, ra: int, rb: int) -> Program:
    """Exchange *ra* and *rb* at every input-operand position."""
    swap = {ra: rb, rb: ra}
    return Program(
        program.n_inputs,
        tuple(
            Instruction(ins.opcode, tuple(swap.get(r, r) for r in ins.inputs), ins.dst)
            for ins in program.instructions
        ),
    )


def execute_swap_all_operands(program: Program, rng: np.random.Generator) -> Program:
    """Rewire two random registers everywhere they are read."""
    ra, rb = (int(r) for r in rng.choice(program.pool_size, size=2, replace=False))
    return swap_operands(program, ra, rb)


def execute_random_restart(program: Program, rng: np.random.Generator) -> Program:
    """Start over from a fresh random program of the same shape."""
    return random_program(program.n_inputs, program.length, rng)
