"""Circuit validity -- dead code elimination and combinational loop checks.

Loop checking only looks at live slots: a loop confined to gates outside the
output's fan-in realizes nothing and does not invalidate the program.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from scsynth.models import Instruction, Program


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of ``validate``."""

    valid: bool
    live_slots: frozenset[int]
    loop_witness: tuple[int, ...] | None = None


def dependency_graph(
    program: Program,
    slots: frozenset[int] | None = None,
    combinational_only: bool = False,
) -> nx.DiGraph:
    """Register-level dataflow graph with an edge ``src -> dst`` per operand.

    With *slots* given, only those slots become nodes and only edges between
    them are kept. With *combinational_only*, operands of DFF/TFF contribute
    no edges since they are read one cycle late.
    """
    graph = nx.DiGraph()
    chosen = range(program.length) if slots is None else sorted(slots)
    for k in chosen:
        ins = program.instructions[k]
        graph.add_node(ins.dst)
        if combinational_only and ins.opcode.is_sequential:
            continue
        for reg in ins.inputs:
            src_slot = program.slot_of(reg)
            if slots is not None and (src_slot is None or src_slot not in slots):
                continue
            graph.add_edge(reg, ins.dst)
    return graph


def dead_code_eliminate(program: Program) -> frozenset[int]:
    """Slots in the transitive fan-in of the output, through gates and flip-flops."""
    graph = dependency_graph(program)
    live_regs = nx.ancestors(graph, program.output) | {program.output}
    return frozenset(
        reg - program.n_inputs for reg in live_regs if reg >= program.n_inputs
    )


def check_combinational_loops(
    program: Program, live: frozenset[int]
) -> tuple[int, ...] | None:
    """Return the registers of one same-cycle cycle among *live* slots, or ``None``."""
    graph = dependency_graph(program, live, combinational_only=True)
    try:
        edges = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return tuple(u for u, _ in edges)


def validate(program: Program) -> ValidityReport:
    """DCE, then a loop check on the live subgraph."""
    live = dead_code_eliminate(program)
    witness = check_combinational_loops(program, live)
    return ValidityReport(valid=witness is None, live_slots=live, loop_witness=witness)


def strip_dead_code(program: Program) -> Program:
    """Drop dead slots and renumber registers; the output slot stays last.

    The result realizes the same output bitstream as *program*.
    """
    live = dead_code_eliminate(program)
    out_slot = program.length - 1
    order = [k for k in sorted(live) if k != out_slot] + [out_slot]
    n = program.n_inputs
    remap = {n + old: n + new for new, old in enumerate(order)}
    remap.update({r: r for r in range(n)})
    return Program(
        n,
        tuple(
            Instruction(
                program.instructions[k].opcode,
                tuple(remap[r] for r in program.instructions[k].inputs),
                remap[program.instructions[k].dst],
            )
            for k in order
        ),
    )


def live_inputs(program: Program) -> frozenset[int]:
    """Input registers read by at least one live slot."""
    live = dead_code_eliminate(program)
    return frozenset(
        reg
        for k in live
        for reg in program.instructions[k].inputs
        if reg < program.n_inputs
    )
