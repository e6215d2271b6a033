"""Cycle-accurate simulation of hardware programs on bitstreams.

Semantics per cycle ``n`` (all flip-flops power on at 0)::

    AND/OR/XOR/NOT/PASS   dst[n] = f(inputs[n])
    MUX src trg sel       dst[n] = src[n] if sel[n] else trg[n]
    DFF src               dst[n] = src[n-1]
    TFF src               dst[n] = dst[n-1] ^ src[n-1]

Streams are laid out ``(cycles, cases)`` so one call simulates every test
case of a suite at once. Live slots are grouped into strongly connected
components of the full dataflow graph and evaluated in topological order.
A component without feedback is computed over the whole stream in one numpy
operation (a DFF is a shift, a TFF a prefix XOR). A component with feedback
through flip-flops is stepped cycle by cycle, publishing flip-flop outputs
first and then the gates in combinational order. ``vectorized=False`` steps
every live slot cycle by cycle and serves as the reference path.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import networkx as nx
import numpy as np

from scsynth.errors import InputBindingError, InvalidProgramError
from scsynth.models import Instruction, Opcode, Program
from scsynth.services.bitgen import Bitstream
from scsynth.services.validity import ValidityReport, dependency_graph, validate


@dataclass(frozen=True)
class Block:
    """Slots evaluated together; ``stepped`` blocks run cycle by cycle."""

    stepped: bool
    sequential: tuple[Instruction, ...]
    combinational: tuple[Instruction, ...]


@dataclass(frozen=True)
class CompiledCircuit:
    """A validated program plus its evaluation schedule."""

    program: Program
    report: ValidityReport
    blocks: tuple[Block, ...]

    @property
    def valid(self) -> bool:
        return self.report.valid


def _block(program: Program, slots: list[int], stepped: bool) -> Block:
    members = frozenset(slots)
    comb_graph = dependency_graph(program, members, combinational_only=True)
    order = [program.slot_of(reg) for reg in nx.lexicographical_topological_sort(comb_graph)]
    instructions = [program.instructions[k] for k in order]
    return Block(
        stepped=stepped,
        sequential=tuple(i for i in instructions if i.opcode.is_sequential),
        combinational=tuple(i for i in instructions if not i.opcode.is_sequential),
    )


def compile_program(program: Program, vectorized: bool = True) -> CompiledCircuit:
    """Validate *program* and derive its evaluation schedule.

    Invalid programs compile to an empty schedule; ``run`` refuses them.
    """
    report = validate(program)
    if not report.valid:
        return CompiledCircuit(program, report, ())
    if not vectorized:
        return CompiledCircuit(
            program, report, (_block(program, sorted(report.live_slots), stepped=True),)
        )

    graph = dependency_graph(program, report.live_slots)
    condensed = nx.condensation(graph)
    blocks = []
    for node in nx.lexicographical_topological_sort(condensed):
        regs = sorted(condensed.nodes[node]["members"])
        slots = [program.slot_of(r) for r in regs]
        stepped = len(regs) > 1 or graph.has_edge(regs[0], regs[0])
        blocks.append(_block(program, slots, stepped))
    return CompiledCircuit(program, report, tuple(blocks))


def _gate(ins: Instruction, streams: np.ndarray, index) -> np.ndarray:
    a = streams[ins.inputs[0], index]
    match ins.opcode:
        case Opcode.AND:
            return a & streams[ins.inputs[1], index]
        case Opcode.OR:
            return a | streams[ins.inputs[1], index]
        case Opcode.XOR:
            return a ^ streams[ins.inputs[1], index]
        case Opcode.NOT:
            return ~a
        case Opcode.PASS:
            return a
        case Opcode.MUX:
            return np.where(streams[ins.inputs[2], index], a, streams[ins.inputs[1], index])
    raise ValueError(f"{ins.opcode.value} is not combinational")


def _run_whole(ins: Instruction, streams: np.ndarray) -> None:
    dst = streams[ins.dst]
    if ins.opcode is Opcode.DFF:
        dst[0] = False
        dst[1:] = streams[ins.inputs[0], :-1]
    elif ins.opcode is Opcode.TFF:
        dst[0] = False
        np.bitwise_xor.accumulate(streams[ins.inputs[0], :-1], axis=0, out=dst[1:])
    else:
        dst[...] = _gate(ins, streams, slice(None))


def _run_stepped(block: Block, streams: np.ndarray) -> None:
    cycles = streams.shape[1]
    for ins in block.sequential:
        streams[ins.dst, 0] = False
    for ins in block.combinational:
        streams[ins.dst, 0] = _gate(ins, streams, 0)
    for n in range(1, cycles):
        for ins in block.sequential:
            prev = streams[ins.inputs[0], n - 1]
            if ins.opcode is Opcode.TFF:
                prev = prev ^ streams[ins.dst, n - 1]
            streams[ins.dst, n] = prev
        for ins in block.combinational:
            streams[ins.dst, n] = _gate(ins, streams, n)


def run(circuit: CompiledCircuit, inputs: np.ndarray) -> np.ndarray:
    """Simulate on stacked input streams of shape ``(n_inputs, cycles, cases)``.

    Returns the output streams, shape ``(cycles, cases)``.
    """
    program = circuit.program
    if not circuit.valid:
        raise InvalidProgramError(list(circuit.report.loop_witness or ()))
    if inputs.ndim != 3 or inputs.shape[0] != program.n_inputs:
        raise InputBindingError(
            f"expected {program.n_inputs} stacked input streams, got shape {inputs.shape}"
        )
    streams = np.zeros((program.pool_size, *inputs.shape[1:]), dtype=bool)
    streams[: program.n_inputs] = inputs
    for block in circuit.blocks:
        if block.stepped:
            _run_stepped(block, streams)
        else:
            for ins in block.sequential + block.combinational:
                _run_whole(ins, streams)
    return streams[program.output]


def simulate_batch(
    program: Program, inputs: np.ndarray, vectorized: bool = True
) -> np.ndarray:
    """Compile and run in one call; see ``run`` for shapes."""
    return run(compile_program(program, vectorized=vectorized), inputs)


def simulate(
    program: Program,
    inputs: Mapping[int, Bitstream],
    length: int,
    vectorized: bool = True,
) -> Bitstream:
    """Simulate one set of input bindings for *length* cycles.

    Raises:
        InvalidProgramError: the live circuit has a combinational loop.
        InputBindingError: an input register is unbound or has the wrong length.
    """
    stacked = np.empty((program.n_inputs, length, 1), dtype=bool)
    for reg in range(program.n_inputs):
        stream = inputs.get(reg)
        if stream is None:
            raise InputBindingError(f"input r{reg} is not bound")
        if stream.length != length:
            raise InputBindingError(
                f"input r{reg} has {stream.length} bits, expected {length}"
            )
        stacked[reg, :, 0] = stream.bits
    return Bitstream(simulate_batch(program, stacked, vectorized=vectorized)[:, 0].copy())
