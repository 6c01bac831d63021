import random

import pytest

from microbot import isa
from microbot.isa import IllegalOpcode, Instruction, OperandOutOfRange, decode, encode, ins

from conftest import random_instruction


def test_mnemonic_set_is_exactly_the_23():
    expected = {
        "mot", "wav", "ts", "mov", "sb", "lb", "li", "add", "addi", "sub",
        "subi", "and", "or", "sll", "srl", "j", "bcnt", "cmp", "cmpi",
        "beq", "bne", "bgt", "blt",
    }
    assert set(isa.MNEMONICS) == expected
    assert len(isa.MNEMONICS) == 23


def test_frozen_encodings():
    # Hand-packed against the layout table in the module docstring.
    assert encode(ins("mov", 0, 0)) == 0
    assert encode(ins("j", 0)) == 15 << 6
    assert encode(ins("j", 5)) == (15 << 6) | (5 << 1)
    assert encode(ins("li", 5, 2)) == (6 << 6) | (5 << 2) | 2
    assert encode(ins("add", 1, 2, 3)) == (7 << 6) | (1 << 4) | (2 << 2) | 3
    assert encode(ins("mot", 63)) == (1 << 6) | 63
    assert encode(ins("beq", 2)) == (19 << 6) | 2
    assert encode(ins("bcnt", 4, 7)) == (16 << 6) | (4 << 3) | 7
    assert encode(ins("wav", 0, 1)) == (2 << 6) | (0 << 2) | 1
    assert encode(ins("sb", 2, 15)) == (4 << 6) | (2 << 4) | 15


def test_encode_is_deterministic():
    a = encode(ins("mov", 0, 0))
    b = encode(ins("mov", 0, 0))
    assert a == b


def test_all_mnemonics_give_distinct_words():
    words = set()
    for mnemonic in isa.MNEMONICS:
        _, fields = isa.FORMATS[mnemonic]
        operands = tuple(
            isa._field_range(mnemonic, kind, width)[0] for kind, width in fields
        )
        words.add(encode(Instruction(mnemonic, operands)))
    assert len(words) == 23


def test_round_trip_simple():
    instr = ins("add", 1, 2, 3)
    assert decode(encode(instr)) == instr


def test_round_trip_random_instructions():
    rng = random.Random(1234)
    for _ in range(10_000):
        instr = random_instruction(rng)
        word = encode(instr)
        assert word < isa.WORD_COUNT
        assert decode(word) == instr


def test_exhaustive_decode_reencode():
    legal = 0
    for word in range(isa.WORD_COUNT):
        try:
            instr = decode(word)
        except IllegalOpcode:
            continue
        legal += 1
        assert encode(instr) == word
    # 23 of 32 opcodes are assigned; short instructions reject padded words
    # and mot rejects a zero count, so the space is strictly smaller.
    assert 0 < legal < isa.WORD_COUNT


def test_unassigned_opcode_is_illegal():
    with pytest.raises(IllegalOpcode):
        decode(23 << 6)
    with pytest.raises(IllegalOpcode):
        decode(31 << 6)


def test_nonzero_padding_is_illegal():
    # ts uses 4 operand bits; bits 1..0 must be zero.
    padded = (3 << 6) | (7 << 2) | 1
    with pytest.raises(IllegalOpcode):
        decode(padded)


def test_mot_zero_count_is_illegal():
    with pytest.raises(IllegalOpcode):
        decode(1 << 6)
    with pytest.raises(OperandOutOfRange):
        ins("mot", 0)


def test_operand_range_validation():
    with pytest.raises(OperandOutOfRange):
        ins("li", 16, 0)  # immediate is 4 bits
    with pytest.raises(OperandOutOfRange):
        ins("add", 4, 0, 0)  # registers are r0..r3
    with pytest.raises(OperandOutOfRange):
        ins("ts", 16)  # memory is m0..m15
    with pytest.raises(OperandOutOfRange):
        ins("j", 32)  # 32-entry instruction memory
    with pytest.raises(OperandOutOfRange):
        ins("mov", 0)  # arity
    with pytest.raises(OperandOutOfRange):
        Instruction("nop", ())  # not an instruction


def test_word_width_guard():
    with pytest.raises(IllegalOpcode):
        decode(1 << 11)
    with pytest.raises(IllegalOpcode):
        decode(-1)
