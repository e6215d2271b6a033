"""Tests for the program representation and the netlist format."""

from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from scsynth.errors import NetlistParseError, SSAViolationError
from scsynth.models import (
    ARITY_GROUPS,
    OPCODES,
    Instruction,
    Opcode,
    Program,
    random_program,
)
from scsynth.services.netlist import format_netlist, parse_netlist
from scsynth.services.validity import dead_code_eliminate

from tests.conftest import SCALE_HALF_NET, SUBTRACTOR_NET


def _has_live_self_read(program: Program) -> bool:
    return any(
        not program.instructions[k].opcode.is_sequential
        and program.instructions[k].dst in program.instructions[k].inputs
        for k in dead_code_eliminate(program)
    )


# ---------------------------------------------------------------------------
# Opcodes
# ---------------------------------------------------------------------------

class TestOpcodes:
    def test_arities(self):
        assert {op: op.arity for op in Opcode} == {
            Opcode.AND: 2,
            Opcode.OR: 2,
            Opcode.XOR: 2,
            Opcode.NOT: 1,
            Opcode.PASS: 1,
            Opcode.DFF: 1,
            Opcode.TFF: 1,
            Opcode.MUX: 3,
        }

    def test_sequential_set(self):
        assert {op for op in Opcode if op.is_sequential} == {Opcode.DFF, Opcode.TFF}

    def test_arity_groups_cover_every_opcode(self):
        grouped = [op for group in ARITY_GROUPS.values() for op in group]
        assert sorted(grouped) == sorted(OPCODES)
        assert ARITY_GROUPS[3] == (Opcode.MUX,)

    def test_instruction_checks_arity(self):
        with pytest.raises(ValueError, match="takes 2 inputs"):
            Instruction(Opcode.AND, (0,), 1)


# ---------------------------------------------------------------------------
# Program
# ---------------------------------------------------------------------------

class TestProgram:
    def test_destination_follows_slot(self):
        with pytest.raises(ValueError, match="must drive r2"):
            Program(2, (Instruction(Opcode.NOT, (0,), 3),))

    def test_operand_outside_pool(self):
        with pytest.raises(ValueError, match="outside the register pool"):
            Program(2, (Instruction(Opcode.NOT, (3,), 2),))

    def test_output_is_last_slot(self, scale_half_program):
        assert scale_half_program.output == 2
        assert scale_half_program.pool_size == 3

    def test_replace_returns_copy(self, subtractor_program):
        changed = subtractor_program.replace(0, Instruction(Opcode.AND, (0, 1), 2))
        assert changed.instructions[0].opcode is Opcode.AND
        assert subtractor_program.instructions[0].opcode is Opcode.XOR


class TestRandomProgram:
    def test_single_slot(self, rng):
        program = random_program(1, 1, rng)
        assert program.instructions[0].dst == 1
        assert program.output == 1

    def test_destinations_follow_slots(self, rng):
        program = random_program(2, 3, rng)
        assert [ins.dst for ins in program.instructions] == [2, 3, 4]
        assert program.output == 4

    def test_operands_within_pool(self, rng):
        for _ in range(200):
            program = random_program(2, 4, rng)
            for ins in program.instructions:
                assert all(0 <= r < 6 for r in ins.inputs)

    def test_opcode_frequencies_uniform(self):
        rng = np.random.default_rng(0)
        counts = Counter(random_program(2, 1, rng).instructions[0].opcode for _ in range(10_000))
        for op in Opcode:
            assert abs(counts[op] / 10_000 - 1 / 8) <= 0.02


# ---------------------------------------------------------------------------
# Netlist parsing
# ---------------------------------------------------------------------------

class TestParseNetlist:
    def test_subtractor(self):
        program = parse_netlist(SUBTRACTOR_NET)
        assert program == Program(2, (Instruction(Opcode.XOR, (0, 1), 2),))

    def test_scale_half(self):
        program = parse_netlist(SCALE_HALF_NET)
        assert [ins.opcode for ins in program.instructions] == [Opcode.TFF, Opcode.AND]
        assert program.instructions[1].inputs == (0, 1)

    def test_comments_blank_lines_and_order(self):
        text = """
        # halving circuit, listed out of order
        inputs 1

        AND r0 r1 -> r2   # gate
        TFF r0 -> r1
        output r2
        """
        assert parse_netlist(text) == parse_netlist(SCALE_HALF_NET)

    def test_lowercase_opcode(self):
        assert parse_netlist("inputs 2\nxor r0 r1 -> r2\noutput r2").instructions[0].opcode is Opcode.XOR

    def test_self_driven_gate_rejected(self):
        with pytest.raises(SSAViolationError, match="r1 is doubly driven and self-driven"):
            parse_netlist("inputs 1\nAND r0 r1 -> r1\noutput r1")

    def test_dead_self_read_allowed(self):
        program = parse_netlist("inputs 1\nAND r1 r0 -> r1\nPASS r0 -> r2\noutput r2")
        assert program.length == 2

    def test_flip_flop_may_read_itself(self):
        program = parse_netlist("inputs 1\nTFF r1 -> r1\noutput r1")
        assert program.instructions[0].inputs == (1,)

    def test_doubly_driven(self):
        with pytest.raises(SSAViolationError, match="doubly driven"):
            parse_netlist("inputs 1\nNOT r0 -> r1\nPASS r0 -> r1\noutput r2")

    def test_input_register_as_destination(self):
        with pytest.raises(SSAViolationError, match="input register"):
            parse_netlist("inputs 2\nNOT r0 -> r1\noutput r1")

    def test_register_outside_pool(self):
        with pytest.raises(NetlistParseError, match="line 2") as exc:
            parse_netlist("inputs 2\nXOR r0 r5 -> r2\noutput r2")
        assert exc.value.line_no == 2

    def test_unknown_opcode(self):
        with pytest.raises(NetlistParseError, match="unknown opcode"):
            parse_netlist("inputs 1\nNAND r0 r0 -> r1\noutput r1")

    def test_wrong_operand_count(self):
        with pytest.raises(NetlistParseError, match="NOT takes 1 inputs"):
            parse_netlist("inputs 1\nNOT r0 r0 -> r1\noutput r1")

    def test_output_must_be_last_slot(self):
        with pytest.raises(NetlistParseError, match="last slot"):
            parse_netlist("inputs 1\nNOT r0 -> r1\nPASS r1 -> r2\noutput r1")

    def test_missing_header(self):
        with pytest.raises(NetlistParseError, match="line 1"):
            parse_netlist("XOR r0 r1 -> r2\noutput r2")

    @pytest.mark.parametrize("count", ["²", "٣", "-1", "two"])
    def test_header_count_must_be_ascii_digits(self, count):
        with pytest.raises(NetlistParseError, match="expected header"):
            parse_netlist(f"inputs {count}\nPASS r0 -> r1\noutput r1")

    @pytest.mark.parametrize("token", ["r١", "r¹"])
    def test_register_number_must_be_ascii_digits(self, token):
        with pytest.raises(NetlistParseError, match="expected a register"):
            parse_netlist(f"inputs 2\nXOR r0 {token} -> r2\noutput r2")

    def test_missing_output(self):
        with pytest.raises(NetlistParseError, match="missing 'output"):
            parse_netlist("inputs 2\nXOR r0 r1 -> r2")

    def test_empty_text(self):
        with pytest.raises(NetlistParseError, match="empty netlist"):
            parse_netlist("")

    def test_bad_register_token(self):
        with pytest.raises(NetlistParseError, match="expected a register"):
            parse_netlist("inputs 2\nXOR r0 x1 -> r2\noutput r2")


class TestFormatNetlist:
    def test_subtractor_text(self, subtractor_program):
        assert format_netlist(subtractor_program) == SUBTRACTOR_NET

    def test_scale_half_byte_identical(self):
        assert format_netlist(parse_netlist(SCALE_HALF_NET)) == SCALE_HALF_NET

    def test_round_trip_random_programs(self, rng):
        checked = 0
        for _ in range(300):
            program = random_program(2, 4, rng)
            if _has_live_self_read(program):
                continue
            assert parse_netlist(format_netlist(program)) == program
            checked += 1
        assert checked > 100
