"""Boolean functions on bit strings: truth tables, ANF, linearity.

Bit convention used across the package: input j (1-based) of a function,
and party j of an experiment, live at integer bit j - 1.  A tuple of bits
(x_1, ..., x_k) therefore encodes to x_1 + 2*x_2 + ... + 2^(k-1)*x_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_ARITY = 24


def parity(value: int) -> int:
    """Parity (XOR fold) of the set bits of a nonnegative integer."""
    return value.bit_count() & 1


def drop_bit(value: int, pos: int) -> int:
    """Remove bit `pos` from `value`, shifting the higher bits down."""
    return ((value >> (pos + 1)) << pos) | (value & ((1 << pos) - 1))


@lru_cache(maxsize=None)
def _index_bit_pattern(arity: int, j: int) -> int:
    """Mask over 2^arity table positions whose index has bit j set."""
    period = 1 << (j + 1)
    unit = ((1 << (1 << j)) - 1) << (1 << j)
    reps = ((1 << (1 << arity)) - 1) // ((1 << period) - 1)
    return unit * reps


def _linear_table(arity: int, a_mask: int, const: int) -> int:
    """Packed truth table of x -> (a_mask . x) XOR const."""
    table = ((1 << (1 << arity)) - 1) if const else 0
    j = 0
    rest = a_mask
    while rest:
        if rest & 1:
            table ^= _index_bit_pattern(arity, j)
        rest >>= 1
        j += 1
    return table


@dataclass(frozen=True)
class BitString:
    """A fixed-length bit string, packed little-endian into an int."""

    length: int
    value: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} out of range for length {self.length}")

    @classmethod
    def from_bits(cls, bits) -> "BitString":
        bits = tuple(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            value |= b << i
        return cls(len(bits), value)

    def bit(self, j: int) -> int:
        """Bit of input/party j (1-based)."""
        if not 1 <= j <= self.length:
            raise IndexError(f"bit index {j} out of range 1..{self.length}")
        return (self.value >> (j - 1)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.length))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits())


@dataclass(frozen=True)
class AnfForm:
    """Algebraic normal form: XOR of AND monomials.

    Bit S of `coefficients` is 1 when the monomial prod_{j in S} x_j is
    present; bit 0 is the constant term.
    """

    arity: int
    coefficients: int

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity must be in 0..{MAX_ARITY}")
        if not 0 <= self.coefficients < (1 << (1 << self.arity)):
            raise ValueError("coefficient mask out of range")

    @property
    def degree(self) -> int:
        """Largest monomial size present, 0 for constants."""
        deg = 0
        rest = self.coefficients
        idx = 0
        while rest:
            if rest & 1:
                deg = max(deg, idx.bit_count())
            rest >>= 1
            idx += 1
        return deg

    def expand(self) -> "BooleanFunction":
        """Truth table of the XOR-of-monomials expression."""
        return BooleanFunction(self.arity, _mobius(self.coefficients, self.arity))


@dataclass(frozen=True)
class BooleanFunction:
    """A function {0,1}^arity -> {0,1} as a packed truth table.

    Bit i of `table` is f(i), so the least significant bit is f(0...0).
    """

    arity: int
    table: int

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity must be in 0..{MAX_ARITY}")
        if not 0 <= self.table < (1 << (1 << self.arity)):
            raise ValueError("truth table out of range for arity")

    @classmethod
    def from_values(cls, arity: int, values) -> "BooleanFunction":
        values = list(values)
        if len(values) != 1 << arity:
            raise ValueError("expected 2^arity table entries")
        table = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError("table entries must be 0 or 1")
            table |= v << i
        return cls(arity, table)

    @classmethod
    def from_callable(cls, arity: int, fn) -> "BooleanFunction":
        return cls.from_values(arity, (fn(i) for i in range(1 << arity)))

    def __call__(self, x: int) -> int:
        if not 0 <= x < (1 << self.arity):
            raise ValueError(f"input {x} out of range for arity {self.arity}")
        return (self.table >> x) & 1

    def evaluate(self, x: BitString) -> int:
        if x.length != self.arity:
            raise ValueError(f"arity mismatch: function {self.arity}, input {x.length}")
        return (self.table >> x.value) & 1

    def values(self) -> tuple[int, ...]:
        return tuple((self.table >> i) & 1 for i in range(1 << self.arity))

    def to_anf(self) -> AnfForm:
        """Moebius transform of the truth table (an involution)."""
        return AnfForm(self.arity, _mobius(self.table, self.arity))

    def is_linear(self) -> bool:
        """True when f(x) = (a . x) XOR b for some mask a and bit b.

        Constants and pure XORs both count; equivalently the ANF degree
        is at most 1.
        """
        const = self.table & 1
        a_mask = 0
        for j in range(self.arity):
            if ((self.table >> (1 << j)) & 1) ^ const:
                a_mask |= 1 << j
        return self.table == _linear_table(self.arity, a_mask, const)

    def xor(self, other: "BooleanFunction") -> "BooleanFunction":
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        return BooleanFunction(self.arity, self.table ^ other.table)

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.arity, self.table ^ ((1 << (1 << self.arity)) - 1))

    def to_text(self) -> str:
        """Compact text form "arity:hex" with f(0...0) in the lowest bit."""
        digits = max(1, (1 << self.arity) // 4)
        return f"{self.arity}:{self.table:0{digits}x}"

    @classmethod
    def from_text(cls, text: str) -> "BooleanFunction":
        try:
            arity_part, hex_part = text.strip().split(":")
            arity = int(arity_part)
            table = int(hex_part, 16)
        except ValueError as exc:
            raise ValueError(f"malformed function text {text!r}") from exc
        return cls(arity, table)


def _mobius(packed: int, arity: int) -> int:
    """Subset-XOR butterfly over a packed 2^arity bit table."""
    out = packed
    for j in range(arity):
        zero_positions = ~_index_bit_pattern(arity, j)
        out ^= (out & zero_positions) << (1 << j)
    return out & ((1 << (1 << arity)) - 1)


def linear_function(arity: int, a_mask: int, const: int) -> BooleanFunction:
    """The function x -> (a_mask . x) XOR const."""
    if not 0 <= a_mask < (1 << arity):
        raise ValueError("mask out of range")
    if const not in (0, 1):
        raise ValueError("const must be 0 or 1")
    return BooleanFunction(arity, _linear_table(arity, a_mask, const))


def enumerate_linear(arity: int) -> tuple[BooleanFunction, ...]:
    """All 2^(arity+1) functions of the form (a . x) XOR b.

    Ordered by index a + (b << arity); this ordering is part of the
    contract because polytope vertex columns and membership weights
    follow it.
    """
    if not 1 <= arity <= MAX_ARITY:
        raise ValueError(f"arity must be in 1..{MAX_ARITY}")
    return tuple(
        linear_function(arity, a, b) for b in (0, 1) for a in range(1 << arity)
    )
