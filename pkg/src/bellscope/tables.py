"""Conditional outcome tables p(m | s) for n-party binary experiments.

Settings s and outcomes m are packed integers with party j at bit j - 1.
Entries may be floats (simulation output) or exact rationals (local
models, or snapped simulation output); arithmetic downstream follows the
entry type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boolfn import drop_bit
from .jsonnum import Number, is_exact

_FLOAT_COLUMN_TOL = 1e-12


@dataclass(frozen=True)
class ConditionalTable:
    """probs[s][m] = p(m | s) with 2^n settings and 2^n outcomes."""

    n: int
    probs: tuple[tuple[Number, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one party")
        size = 1 << self.n
        if len(self.probs) != size or any(len(row) != size for row in self.probs):
            raise ValueError("table must be 2^n x 2^n")
        for row in self.probs:
            total = sum(row)
            if self.is_exact:
                if any(p < 0 for p in row) or total != 1:
                    raise ValueError("each conditional distribution must be exact and sum to 1")
            else:
                if any(p < -_FLOAT_COLUMN_TOL for p in row):
                    raise ValueError("negative probability")
                if abs(total - 1.0) > _FLOAT_COLUMN_TOL:
                    raise ValueError(f"conditional distribution sums to {total}, not 1")

    @property
    def is_exact(self) -> bool:
        return all(is_exact(p) for row in self.probs for p in row)

    def distribution(self, s: int) -> tuple[Number, ...]:
        """The outcome distribution under joint setting s."""
        return self.probs[s]

    def relabel_settings(self, invert_mask: int) -> "ConditionalTable":
        """Swap the two settings of every party selected by `invert_mask`."""
        size = 1 << self.n
        if not 0 <= invert_mask < size:
            raise ValueError("mask out of range")
        return ConditionalTable(self.n, tuple(self.probs[s ^ invert_mask] for s in range(size)))

    def relabel_outputs(self, setting_mask: int = 0, const_mask: int = 0) -> "ConditionalTable":
        """Report m_j XOR s_j for parties in `setting_mask`, then XOR `const_mask`.

        Both relabellings are local classical post-processing, so they
        preserve non-signalling.
        """
        size = 1 << self.n
        if not (0 <= setting_mask < size and 0 <= const_mask < size):
            raise ValueError("mask out of range")
        rows = []
        for s in range(size):
            shift = (s & setting_mask) ^ const_mask
            rows.append(tuple(self.probs[s][m ^ shift] for m in range(size)))
        return ConditionalTable(self.n, tuple(rows))

    def subset_marginal(self, s: int, parties: tuple[int, ...]) -> tuple[Number, ...]:
        """Marginal distribution of the listed parties' outcomes (1-based)."""
        positions = [j - 1 for j in parties]
        out = [0 * self.probs[0][0]] * (1 << len(positions))
        for m, p in enumerate(self.probs[s]):
            key = 0
            for i, pos in enumerate(positions):
                key |= ((m >> pos) & 1) << i
            out[key] += p
        return tuple(out)

    def non_signalling_defect(self) -> Number:
        """Largest change of any single-party-excluded marginal when only
        that party's setting flips.  Zero for every physical table."""
        size = 1 << self.n
        worst = 0 * self.probs[0][0]
        others = {j: tuple(i for i in range(1, self.n + 1) if i != j) for j in range(1, self.n + 1)}
        for j in range(1, self.n + 1):
            bit = 1 << (j - 1)
            for s in range(size):
                if s & bit:
                    continue
                a = self.subset_marginal(s, others[j])
                b = self.subset_marginal(s | bit, others[j])
                for pa, pb in zip(a, b):
                    diff = abs(pa - pb)
                    if diff > worst:
                        worst = diff
        return worst

    def snap_to_rational(self, max_denominator: int = 4096, tol: float = 1e-9) -> "ConditionalTable":
        """Replace float entries by the nearest small rational.

        Intended for tables whose true entries are known to be rationals
        (e.g. X/Y measurements on graph-like states); each snapped entry
        must sit within `tol` of the float and each distribution must
        then sum to exactly 1, otherwise the snap is refused.
        """
        rows = []
        for s, row in enumerate(self.probs):
            snapped = []
            for m, p in enumerate(row):
                q = Fraction(p).limit_denominator(max_denominator)
                if abs(float(q) - float(p)) > tol:
                    raise ValueError(f"entry p({m}|{s}) = {p} is not within {tol} of a small rational")
                snapped.append(q)
            if sum(snapped) != 1:
                raise ValueError(f"snapped distribution for s={s} does not sum to 1")
            rows.append(tuple(snapped))
        return ConditionalTable(self.n, tuple(rows))

    def outcome_parity_given(self, s: int) -> Number:
        """p(XOR of all outcomes = 1 | s)."""
        row = self.probs[s]
        odd = 0 * row[0]
        for m, p in enumerate(row):
            if m.bit_count() & 1:
                odd += p
        return odd


def product_table(low: ConditionalTable, high: ConditionalTable) -> ConditionalTable:
    """Independent side-by-side composition; `low` holds parties 1..low.n."""
    n = low.n + high.n
    size = 1 << n
    low_mask = (1 << low.n) - 1
    rows = []
    for s in range(size):
        s_lo, s_hi = s & low_mask, s >> low.n
        row = []
        for m in range(size):
            row.append(low.probs[s_lo][m & low_mask] * high.probs[s_hi][m >> low.n])
        rows.append(tuple(row))
    return ConditionalTable(n, tuple(rows))


def restrict_outcome_bit(m: int, j: int) -> int:
    """Outcome word with party j's bit removed (others shift down)."""
    return drop_bit(m, j - 1)
