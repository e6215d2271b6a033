"""Tests for dead code elimination and combinational loop detection."""

from __future__ import annotations

import numpy as np

from scsynth.errors import InvalidProgramError
from scsynth.models import Instruction, Opcode, Program, random_program
from scsynth.services.netlist import parse_netlist
from scsynth.services.simulator import simulate_batch
from scsynth.services.validity import (
    check_combinational_loops,
    dead_code_eliminate,
    live_inputs,
    strip_dead_code,
    validate,
)


def _program(n_inputs: int, *specs: tuple[Opcode, tuple[int, ...]]) -> Program:
    return Program(
        n_inputs,
        tuple(Instruction(op, ins, n_inputs + k) for k, (op, ins) in enumerate(specs)),
    )


# ---------------------------------------------------------------------------
# Dead code elimination
# ---------------------------------------------------------------------------

class TestDeadCodeEliminate:
    def test_unused_slot_is_dead(self):
        program = parse_netlist("inputs 2\nNOT r0 -> r2\nXOR r0 r1 -> r3\noutput r3")
        assert dead_code_eliminate(program) == frozenset({1})

    def test_fan_in_through_flip_flops(self, scale_half_program):
        assert dead_code_eliminate(scale_half_program) == frozenset({0, 1})

    def test_feedback_keeps_both_slots(self):
        program = _program(1, (Opcode.XOR, (0, 2)), (Opcode.DFF, (1,)))
        assert dead_code_eliminate(program) == frozenset({0, 1})

    def test_output_slot_always_live(self):
        program = _program(2, (Opcode.AND, (0, 1)), (Opcode.PASS, (0,)))
        assert dead_code_eliminate(program) == frozenset({1})


# ---------------------------------------------------------------------------
# Loops
# ---------------------------------------------------------------------------

class TestCombinationalLoops:
    def test_live_two_gate_loop(self):
        program = _program(1, (Opcode.AND, (0, 2)), (Opcode.OR, (1, 0)))
        report = validate(program)
        assert report.valid is False
        assert set(report.loop_witness) == {1, 2}

    def test_live_self_loop(self):
        program = _program(1, (Opcode.NOT, (1,)))
        assert check_combinational_loops(program, frozenset({0})) == (1,)

    def test_flip_flop_breaks_loop(self):
        program = _program(1, (Opcode.AND, (0, 2)), (Opcode.DFF, (1,)))
        assert validate(program).valid is True

    def test_mux_select_is_combinational(self):
        program = _program(1, (Opcode.MUX, (0, 0, 2)), (Opcode.PASS, (1,)))
        assert validate(program).valid is False

    def test_dead_loop_is_allowed(self):
        program = _program(1, (Opcode.AND, (0, 1)), (Opcode.NOT, (0,)))
        report = validate(program)
        assert report.valid is True
        assert report.live_slots == frozenset({1})

    def test_witness_message(self):
        program = _program(1, (Opcode.AND, (0, 2)), (Opcode.OR, (1, 0)))
        report = validate(program)
        error = InvalidProgramError(list(report.loop_witness))
        assert str(error).startswith("combinational loop: r")
        assert "r1" in str(error) and "r2" in str(error)


# ---------------------------------------------------------------------------
# Live-circuit helpers
# ---------------------------------------------------------------------------

class TestStripDeadCode:
    def test_drops_dead_slots_and_renumbers(self):
        program = parse_netlist(
            "inputs 1\nNOT r0 -> r1\nTFF r0 -> r2\nOR r0 r0 -> r3\nAND r0 r2 -> r4\noutput r4"
        )
        live = strip_dead_code(program)
        assert live.length == 2
        assert [ins.opcode for ins in live.instructions] == [Opcode.TFF, Opcode.AND]
        assert live.instructions[1].inputs == (0, 1)

    def test_same_output_bitstream(self, rng):
        inputs = rng.random((2, 48, 3)) < 0.5
        checked = 0
        for _ in range(200):
            program = random_program(2, 5, rng)
            if not validate(program).valid:
                continue
            np.testing.assert_array_equal(
                simulate_batch(program, inputs), simulate_batch(strip_dead_code(program), inputs)
            )
            checked += 1
        assert checked > 20


class TestLiveInputs:
    def test_reports_read_inputs(self):
        program = parse_netlist("inputs 3\nNOT r0 -> r3\nXOR r1 r2 -> r4\noutput r4")
        assert live_inputs(program) == frozenset({1, 2})

    def test_no_inputs(self):
        program = parse_netlist("inputs 2\nDFF r2 -> r2\noutput r2")
        assert live_inputs(program) == frozenset()
