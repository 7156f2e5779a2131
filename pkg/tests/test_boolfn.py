"""Truth tables, ANF, linearity, and the text codec."""

import itertools

import pytest

from bellscope.boolfn import (
    AnfForm,
    BitString,
    BooleanFunction,
    enumerate_linear,
    linear_function,
    parity,
)


def anf_by_substitution(f: BooleanFunction) -> dict[int, int]:
    """Independent ANF: solve for monomial coefficients by Mobius
    inversion written the slow, obvious way."""
    coeffs = {}
    for mono in range(1 << f.arity):
        acc = 0
        for x in range(1 << f.arity):
            if x | mono == mono:
                acc ^= f(x)
        if acc:
            coeffs[mono] = 1
    return coeffs


def eval_anf(coeffs: dict[int, int], x: int) -> int:
    total = 0
    for mono in coeffs:
        if x & mono == mono:
            total ^= 1
    return total


def test_parity():
    assert parity(0) == 0
    assert parity(0b1011) == 1
    assert parity(0b1111) == 0


def test_bitstring_round_trip():
    s = BitString.from_bits((1, 0, 1))
    assert s.value == 0b101
    assert s.bits() == (1, 0, 1)
    assert s.bit(1) == 1 and s.bit(2) == 0 and s.bit(3) == 1


def test_bitstring_rejects_out_of_range():
    with pytest.raises(ValueError):
        BitString(2, 4)


def test_from_values_and_call():
    f = BooleanFunction.from_values(2, (0, 1, 1, 0))
    assert [f(x) for x in range(4)] == [0, 1, 1, 0]
    assert f.evaluate(BitString(2, 0b11)) == 0


def test_from_callable_matches_manual_table():
    f = BooleanFunction.from_callable(3, lambda x: (x >> 2) & 1)
    assert f.values() == tuple(int(x >= 4) for x in range(8))


def test_anf_matches_substitution_oracle():
    """Packed Mobius transform agrees with coefficient-by-coefficient
    substitution for every 3-bit function."""
    for table in range(256):
        f = BooleanFunction(3, table)
        expected = anf_by_substitution(f)
        mask = 0
        for mono in expected:
            mask |= 1 << mono
        assert f.to_anf().coefficients == mask
        for x in range(8):
            assert eval_anf(expected, x) == f(x)


def test_anf_expand_round_trip():
    for table in range(256):
        f = BooleanFunction(3, table)
        assert f.to_anf().expand() == f


def test_anf_degree():
    assert BooleanFunction.from_values(2, (0, 0, 0, 1)).to_anf().degree == 2
    assert BooleanFunction.from_values(2, (0, 1, 1, 0)).to_anf().degree == 1
    assert BooleanFunction.from_values(2, (1, 1, 1, 1)).to_anf().degree == 0


def test_linear_function_closed_form():
    """f(x) = (a & x parity) xor b by direct evaluation."""
    for a in range(8):
        for b in (0, 1):
            f = linear_function(3, a, b)
            for x in range(8):
                assert f(x) == parity(a & x) ^ b


def test_is_linear_exhaustive_arity2():
    """Exactly the 8 affine functions of 2 variables report linear."""
    linear_tables = set()
    for a in range(4):
        for b in (0, 1):
            linear_tables.add(linear_function(2, a, b).table)
    for table in range(16):
        f = BooleanFunction(2, table)
        assert f.is_linear() == (table in linear_tables)
        assert f.is_linear() == (f.to_anf().degree <= 1)


def test_enumerate_linear_count_and_uniqueness():
    for k in range(1, 5):
        fs = enumerate_linear(k)
        assert len(fs) == 2 ** (k + 1)
        assert len({f.table for f in fs}) == len(fs)
        assert all(f.is_linear() for f in fs)


def test_enumerate_linear_order_is_stable():
    """Constant-0 block first, then the complemented block, masks
    ascending inside each; downstream weights index into this order."""
    fs = enumerate_linear(2)
    expected = [linear_function(2, a, b) for b in (0, 1) for a in range(4)]
    assert list(fs) == expected


def test_xor_and_complement():
    f = BooleanFunction.from_values(2, (0, 0, 0, 1))
    g = BooleanFunction.from_values(2, (0, 1, 1, 0))
    assert f.xor(g).values() == (0, 1, 1, 1)
    assert f.complement().values() == (1, 1, 1, 0)


def test_text_codec_round_trip():
    for k, table in [(1, 0b10), (2, 0b1000), (3, 0x96), (4, 0xDEAD)]:
        f = BooleanFunction(k, table)
        assert BooleanFunction.from_text(f.to_text()) == f


def test_text_codec_examples():
    assert BooleanFunction.from_values(2, (0, 0, 0, 1)).to_text() == "2:8"
    assert BooleanFunction.from_text("2:8").values() == (0, 0, 0, 1)


def test_text_codec_rejects_garbage():
    for text in ["", "2", "2:", "x:8", "2:zz", "2:888"]:
        with pytest.raises(ValueError):
            BooleanFunction.from_text(text)


def test_arity_cap():
    with pytest.raises(ValueError):
        BooleanFunction(25, 0)


def test_function_of_every_arity_0():
    zero = BooleanFunction.from_values(0, (0,))
    one = BooleanFunction.from_values(0, (1,))
    assert zero(0) == 0 and one(0) == 1
    assert zero.is_linear() and one.is_linear()


def test_anf_form_validation():
    with pytest.raises(ValueError):
        AnfForm(2, 1 << 16)


def test_all_two_bit_functions_round_trip_text():
    seen = set()
    for table in range(16):
        text = BooleanFunction(2, table).to_text()
        assert text not in seen
        seen.add(text)
        assert BooleanFunction.from_text(text).table == table


def test_values_matches_iteration():
    for k in (0, 1, 2, 3):
        for table in itertools.islice(range(1 << (1 << k)), 0, None, 7):
            f = BooleanFunction(k, table)
            assert f.values() == tuple(f(x) for x in range(1 << k))
