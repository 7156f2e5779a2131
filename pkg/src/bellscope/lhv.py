"""Local hidden variable models as mixtures of deterministic strategies.

A deterministic strategy gives party j the response m_j = a_j s_j XOR b_j;
a model is a finite weighted mixture of such strategies.  Weights may be
exact rationals, in which case every derived table stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boolfn import BooleanFunction, linear_function, parity
from .jsonnum import Number, from_jsonable, is_exact, to_jsonable
from .tables import ConditionalTable

_WEIGHT_SUM_TOL = 1e-12
MAX_ENUMERATION_PARTIES = 8


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per-party response bits: m_j = a[j-1] * s_j XOR b[j-1]."""

    n: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one party")
        if len(self.a) != self.n or len(self.b) != self.n:
            raise ValueError("a and b must list one bit per party")
        if any(bit not in (0, 1) for bit in self.a + self.b):
            raise ValueError("a and b entries must be bits")

    @property
    def a_mask(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.a))

    @property
    def b_mask(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.b))

    def outcomes(self, s: int) -> int:
        """Packed outcome word for the packed setting word s."""
        return (self.a_mask & s) ^ self.b_mask

    @classmethod
    def from_masks(cls, n: int, a_mask: int, b_mask: int) -> "DeterministicStrategy":
        return cls(
            n,
            tuple((a_mask >> i) & 1 for i in range(n)),
            tuple((b_mask >> i) & 1 for i in range(n)),
        )


def global_function(strategy: DeterministicStrategy) -> BooleanFunction:
    """The parity map s -> XOR_j m_j = (a . s) XOR (XOR_j b_j).

    Always of the linear (affine) form, whatever the strategy.
    """
    return linear_function(strategy.n, strategy.a_mask, parity(strategy.b_mask))


def enumerate_strategies(n: int) -> tuple[DeterministicStrategy, ...]:
    """All 4^n deterministic strategies, ordered by (a_mask, b_mask)."""
    if not 1 <= n <= MAX_ENUMERATION_PARTIES:
        raise ValueError(f"party count must be in 1..{MAX_ENUMERATION_PARTIES}")
    return tuple(
        DeterministicStrategy.from_masks(n, a, b)
        for a in range(1 << n)
        for b in range(1 << n)
    )


@dataclass(frozen=True)
class LhvModel:
    """Weighted mixture of deterministic strategies on n parties."""

    n: int
    support: tuple[tuple[Number, DeterministicStrategy], ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise ValueError("model needs a nonempty support")
        for weight, strategy in self.support:
            if strategy.n != self.n:
                raise ValueError("strategy party count mismatch")
            if weight < 0:
                raise ValueError("weights must be nonnegative")
        total = sum(w for w, _ in self.support)
        if self.is_exact:
            if total != 1:
                raise ValueError(f"weights sum to {total}, not 1")
        elif abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {total}, not 1")

    @property
    def is_exact(self) -> bool:
        return all(is_exact(w) for w, _ in self.support)

    @classmethod
    def uniform(cls, strategies) -> "LhvModel":
        strategies = tuple(strategies)
        w = Fraction(1, len(strategies))
        return cls(strategies[0].n, tuple((w, s) for s in strategies))


def joint_table(model: LhvModel) -> ConditionalTable:
    """Exact-where-possible conditional table of the mixture."""
    size = 1 << model.n
    zero: Number = Fraction(0) if model.is_exact else 0.0
    rows = [[zero] * size for _ in range(size)]
    for weight, strategy in model.support:
        a_mask, b_mask = strategy.a_mask, strategy.b_mask
        for s in range(size):
            rows[s][(a_mask & s) ^ b_mask] += weight
    return ConditionalTable(model.n, tuple(tuple(row) for row in rows))


def model_to_json(model: LhvModel) -> dict:
    return {
        "format": 1,
        "n": model.n,
        "support": [
            {"weight": to_jsonable(w), "a": list(s.a), "b": list(s.b)}
            for w, s in model.support
        ],
    }


def model_from_json(data: dict) -> LhvModel:
    if not isinstance(data, dict):
        raise ValueError("model JSON must be an object")
    if data.get("format", 1) != 1:
        raise ValueError("unsupported format version")
    try:
        n = int(data["n"])
        support = tuple(
            (
                from_jsonable(entry["weight"]),
                DeterministicStrategy(n, tuple(entry["a"]), tuple(entry["b"])),
            )
            for entry in data["support"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed model JSON: {exc}") from exc
    return LhvModel(n, support)
