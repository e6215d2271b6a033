"""Brute-force search over every program of a given length.

Enumeration convention: slot ``k`` always drives ``r{n_inputs + k}``; each
slot independently takes any of the 8 opcodes with every operand drawn from
the whole register pool (``n_inputs + length`` registers). The raw space
therefore holds ``prod_k sum_op pool**arity(op)`` candidates.

Candidates are visited in ``itertools.product`` order, slot 0 most
significant, opcodes in ``OPCODES`` order. The first zero-cost candidate
ends the search.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import structlog

from scsynth.config import settings
from scsynth.errors import SearchSpaceTooLargeError
from scsynth.log_setup import configure_logging
from scsynth.models import OPCODES, Instruction, Opcode, Program
from scsynth.services.cost import CostFunction, TestSuite

log = structlog.get_logger()

COMMUTATIVE: frozenset[Opcode] = frozenset({Opcode.AND, Opcode.OR, Opcode.XOR})

_OPCODE_RANK = {op: i for i, op in enumerate(OPCODES)}


@dataclass(frozen=True)
class EnumerationResult:
    program: Program
    cost: float
    evaluated: int
    skipped: int
    total: int


def count_candidates(n_inputs: int, length: int) -> int:
    """Size of the raw search space; exact integer."""
    if length < 1:
        raise ValueError("length must be at least 1")
    pool = n_inputs + length
    per_slot = sum(pool**op.arity for op in OPCODES)
    return per_slot**length


def _slot_choices(pool: int, dst: int) -> list[Instruction]:
    return [
        Instruction(op, inputs, dst)
        for op in OPCODES
        for inputs in itertools.product(range(pool), repeat=op.arity)
    ]


def iter_candidates(n_inputs: int, length: int, start: int = 0) -> Iterator[Program]:
    """Every program of the raw space from index *start* on, in enumeration order.

    *start* is decoded into one choice index per slot, so nothing before it
    is built.
    """
    pool = n_inputs + length
    choices = [_slot_choices(pool, n_inputs + k) for k in range(length)]
    rest, digits = start, []
    for slot_choices in reversed(choices):
        rest, digit = divmod(rest, len(slot_choices))
        digits.append(digit)
    if rest:
        return
    digits.reverse()

    # Odometer tail: the last slot runs on from its digit, then each earlier
    # slot advances by one with everything after it starting over.
    blocks = []
    for k in range(length - 1, -1, -1):
        first = digits[k] if k == length - 1 else digits[k] + 1
        fixed = [[choices[j][digits[j]]] for j in range(k)]
        blocks.append(itertools.product(*fixed, choices[k][first:], *choices[k + 1 :]))
    for instructions in itertools.chain.from_iterable(blocks):
        yield Program(n_inputs, instructions)


# ---------------------------------------------------------------------------
# Reduced mode
# ---------------------------------------------------------------------------

def _key(instructions: tuple[Instruction, ...]) -> tuple:
    return tuple((_OPCODE_RANK[ins.opcode], ins.inputs) for ins in instructions)


def _sorted_operands(ins: Instruction) -> Instruction:
    if ins.opcode in COMMUTATIVE:
        return Instruction(ins.opcode, tuple(sorted(ins.inputs)), ins.dst)
    return ins


def _relabel(program: Program, order: tuple[int, ...]) -> tuple[Instruction, ...]:
    """Place old slot ``order[j]`` at position ``j``; the output slot stays last."""
    n = program.n_inputs
    last = program.length - 1
    new_slot = {old: new for new, old in enumerate(order)}
    new_slot[last] = last
    remap = {n + old: n + new for old, new in new_slot.items()}
    out = []
    for new, old in enumerate([*order, last]):
        ins = program.instructions[old]
        out.append(
            _sorted_operands(
                Instruction(ins.opcode, tuple(remap.get(r, r) for r in ins.inputs), n + new)
            )
        )
    return tuple(out)


def is_canonical(program: Program) -> bool:
    """True for the representative of its symmetry class.

    Symmetries: operand order of AND/OR/XOR, and any permutation of the
    non-output slots with their destination registers renamed along.
    """
    own = program.instructions
    if any(_sorted_operands(ins) != ins for ins in own):
        return False
    own_key = _key(own)
    movable = range(program.length - 1)
    for order in itertools.permutations(movable):
        if order == tuple(movable):
            continue
        if _key(_relabel(program, order)) < own_key:
            return False
    return True


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

def _search_range(
    suite: TestSuite, n_inputs: int, length: int, start: int, stop: int, reduced: bool
) -> tuple[float, int, Program | None, int, int]:
    cost_of = CostFunction(suite)
    best_cost, best_index, best = math.inf, -1, None
    evaluated = skipped = 0
    candidates = itertools.islice(iter_candidates(n_inputs, length, start), stop - start)
    for index, program in enumerate(candidates, start=start):
        if reduced and not is_canonical(program):
            skipped += 1
            continue
        cost = cost_of(program)
        evaluated += 1
        if cost < best_cost:
            best_cost, best_index, best = cost, index, program
            if cost == 0.0:
                break
    return best_cost, best_index, best, evaluated, skipped


def enumerate_best(
    suite: TestSuite,
    n_inputs: int,
    length: int,
    limit: int | None = None,
    reduced: bool = False,
    workers: int = 1,
) -> EnumerationResult:
    """Minimum-cost program of the given length; ties go to the earliest candidate.

    Raises:
        SearchSpaceTooLargeError: the raw space exceeds *limit*.
    """
    limit = settings.ENUM_LIMIT if limit is None else limit
    total = count_candidates(n_inputs, length)
    if total > limit:
        raise SearchSpaceTooLargeError(total, limit)

    workers = max(1, min(workers, total))
    if workers == 1:
        parts = [_search_range(suite, n_inputs, length, 0, total, reduced)]
    else:
        bounds = [total * w // workers for w in range(workers + 1)]
        with ProcessPoolExecutor(max_workers=workers, initializer=configure_logging) as pool:
            parts = list(
                pool.map(
                    _search_range,
                    [suite] * workers,
                    [n_inputs] * workers,
                    [length] * workers,
                    bounds[:-1],
                    bounds[1:],
                    [reduced] * workers,
                )
            )

    found = [p for p in parts if p[2] is not None]
    best_cost, best_index, best, _, _ = min(found, key=lambda p: (p[0], p[1]))
    evaluated = sum(p[3] for p in parts)
    skipped = sum(p[4] for p in parts)
    log.info(
        "enumeration_finished",
        length=length,
        total=total,
        evaluated=evaluated,
        skipped=skipped,
        best_cost=best_cost,
        best_index=best_index,
    )
    return EnumerationResult(best, best_cost, evaluated, skipped, total)
