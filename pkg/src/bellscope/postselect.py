"""Post-selection on setting constraints s_j = g_j(m^(j), x).

Each party's rule may read the external input word x and the other
parties' outcomes m^(j) (never its own).  Rules that read no outcome
bits are setting-only ("sp"); the rest are setting-and-output ("sop").
Conditioning is computed by exact filtering of the joint table under
uniform settings, so rational tables give rational conditionals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .boolfn import BooleanFunction, drop_bit, parity
from .geometry import CorrelatorVector, MembershipResult, membership
from .jsonnum import Number, to_jsonable
from .lhv import LhvModel, joint_table
from .tables import ConditionalTable


class ZeroSelectionError(ValueError):
    """Raised when the selected event has probability zero at some x."""

    def __init__(self, x: int):
        self.x = x
        super().__init__(f"selection probability is zero at x={x}")


@dataclass(frozen=True)
class LinearRule:
    """g(m^(j), x) = (m_mask . m^(j)) XOR (x_mask . x) XOR const."""

    x_mask: int
    m_mask: int
    const: int

    def __post_init__(self) -> None:
        if self.const not in (0, 1):
            raise ValueError("const must be a bit")
        if self.x_mask < 0 or self.m_mask < 0:
            raise ValueError("masks must be nonnegative")


@dataclass(frozen=True)
class GeneralRule:
    """Arbitrary truth table over the joint word m^(j) | x << (n-1)."""

    table: BooleanFunction


PartyRule = LinearRule | GeneralRule


@dataclass(frozen=True)
class SelectionRule:
    """One rule per party for an n-party experiment with k input bits."""

    n: int
    k: int
    parties: tuple[PartyRule, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        if len(self.parties) != self.n:
            raise ValueError("need one rule per party")
        joint_arity = self.n - 1 + self.k
        for rule in self.parties:
            if isinstance(rule, LinearRule):
                if rule.x_mask >= (1 << self.k) or rule.m_mask >= (1 << (self.n - 1)):
                    raise ValueError("rule mask out of range")
            elif rule.table.arity != joint_arity:
                raise ValueError(
                    f"table rule arity {rule.table.arity} != {joint_arity} (m bits then x bits)"
                )

    def party_value(self, j: int, m: int, x: int) -> int:
        """g_j evaluated on the outcome word m (party j's bit ignored) and x."""
        rule = self.parties[j - 1]
        m_rest = drop_bit(m, j - 1)
        if isinstance(rule, LinearRule):
            return parity(rule.m_mask & m_rest) ^ parity(rule.x_mask & x) ^ rule.const
        return rule.table(m_rest | (x << (self.n - 1)))

    def selects(self, s: int, m: int, x: int) -> bool:
        return all(
            ((s >> (j - 1)) & 1) == self.party_value(j, m, x) for j in range(1, self.n + 1)
        )


class RuleClassification(NamedTuple):
    kind: str  # "sp" | "sop"
    linearity: str  # "linear" | "nonlinear"


def _reads_outcomes(rule: PartyRule, n: int) -> bool:
    if isinstance(rule, LinearRule):
        return rule.m_mask != 0
    f = rule.table
    for pos in range(n - 1):
        bit = 1 << pos
        if any(f(i) != f(i ^ bit) for i in range(1 << f.arity)):
            return True
    return False


def _is_linear(rule: PartyRule) -> bool:
    if isinstance(rule, LinearRule):
        return True
    return rule.table.is_linear()


def classify(rule: SelectionRule) -> RuleClassification:
    kind = "sop" if any(_reads_outcomes(r, rule.n) for r in rule.parties) else "sp"
    linearity = "linear" if all(_is_linear(r) for r in rule.parties) else "nonlinear"
    return RuleClassification(kind, linearity)


def outcome_readers(rule: SelectionRule) -> tuple[frozenset[int], ...]:
    """For each party, the set of parties whose outcomes its rule reads.

    Mask bits and table inputs index the reduced word m^(j), so position
    p stands for party p+1 below the owner and p+2 at or above it."""
    readers = []
    for j in range(1, rule.n + 1):
        r = rule.parties[j - 1]
        positions = set()
        if isinstance(r, LinearRule):
            mask = r.m_mask
            pos = 0
            while mask:
                if mask & 1:
                    positions.add(pos)
                mask >>= 1
                pos += 1
        else:
            f = r.table
            for pos in range(rule.n - 1):
                bit = 1 << pos
                if any(f(i) != f(i ^ bit) for i in range(1 << f.arity)):
                    positions.add(pos)
        readers.append(frozenset(p + 1 if p < j - 1 else p + 2 for p in positions))
    return tuple(readers)


def dependence_order(rule: SelectionRule) -> tuple[int, ...] | None:
    """A measurement order where each party's rule only reads outcomes
    of earlier parties, or None when the dependence graph has a cycle.

    Feed-forward rules admit exactly one consistent setting word per
    (hidden variable, x), which is what keeps the selection rate
    independent of the hidden variable; cyclic rules lose that guarantee
    and with it the locality-preservation theorem (see the tests for an
    explicit cyclic counterexample)."""
    readers = outcome_readers(rule)
    remaining = set(range(1, rule.n + 1))
    placed: set[int] = set()
    order: list[int] = []
    while remaining:
        ready = sorted(j for j in remaining if readers[j - 1] <= placed)
        if not ready:
            return None
        order.append(ready[0])
        placed.add(ready[0])
        remaining.remove(ready[0])
    return tuple(order)


def is_feedforward(rule: SelectionRule) -> bool:
    """True when outcome dependence between parties is acyclic."""
    return dependence_order(rule) is not None


@dataclass(frozen=True)
class PostSelectionReport:
    correlator: CorrelatorVector
    selection_probability: tuple[Number, ...]
    kept_fraction: Number  # mean selection probability across x


def apply(table: ConditionalTable, rule: SelectionRule) -> PostSelectionReport:
    """Condition the parity of outcomes on the selection constraints.

    Settings are uniform, so for each x the kept weight is
    2^-n * sum over (s, m) of p(m|s) restricted to the constraint set.
    Exact table entries make every reported number exact.
    """
    if table.n != rule.n:
        raise ValueError("party count mismatch between table and rule")
    size = 1 << rule.n
    exact = table.is_exact
    zero: Number = Fraction(0) if exact else 0.0
    entries = []
    selection = []
    for x in range(1 << rule.k):
        kept = zero
        odd = zero
        for m in range(size):
            m_parity = m.bit_count() & 1
            for s in range(size):
                p = table.probs[s][m]
                if p and rule.selects(s, m, x):
                    kept += p
                    if m_parity:
                        odd += p
        if kept == 0:
            raise ZeroSelectionError(x)
        entries.append(odd / kept)
        selection.append(kept / size)
    total = sum(selection)
    kept_fraction = Fraction(total, len(selection)) if exact else total / len(selection)
    return PostSelectionReport(
        CorrelatorVector(rule.k, tuple(entries)), tuple(selection), kept_fraction
    )


class PredicateSelection(NamedTuple):
    correlator: CorrelatorVector  # over settings s, not over x
    kept: tuple[Number, ...]  # p(keep | s) per setting


def apply_predicate(
    table: ConditionalTable, keep: Callable[[int, int], bool]
) -> PredicateSelection:
    """Condition on an arbitrary event keep(s, m), per setting word."""
    size = 1 << table.n
    zero: Number = Fraction(0) if table.is_exact else 0.0
    entries = []
    weights = []
    for s in range(size):
        kept = zero
        odd = zero
        for m, p in enumerate(table.probs[s]):
            if p and keep(s, m):
                kept += p
                if m.bit_count() & 1:
                    odd += p
        if kept == 0:
            raise ZeroSelectionError(s)
        entries.append(odd / kept)
        weights.append(kept)
    return PredicateSelection(CorrelatorVector(table.n, tuple(entries)), tuple(weights))


def lhv_invariance_witness(model: LhvModel, rule: SelectionRule) -> MembershipResult:
    """Membership verdict for a local model conditioned by a linear rule.

    Linear feed-forward rules cannot move local correlations out of the
    polytope, so for them the verdict is always "inside"; this helper
    exists to check exactly that, with exact arithmetic when the model
    is exact.  Cyclic outcome dependence voids the guarantee: the kept
    fraction then varies with the hidden variable, which correlates it
    with x (see dependence_order).
    """
    classification = classify(rule)
    if classification.linearity != "linear":
        raise ValueError("witness is only defined for linear rules")
    report = apply(joint_table(model), rule)
    return membership(report.correlator)


def rule_to_json(rule: SelectionRule) -> dict:
    parties = []
    for r in rule.parties:
        if isinstance(r, LinearRule):
            parties.append(
                {"kind": "linear", "x_mask": r.x_mask, "m_mask": r.m_mask, "const": r.const}
            )
        else:
            parties.append({"kind": "table", "truth_table": r.table.to_text()})
    return {"format": 1, "n": rule.n, "k": rule.k, "parties": parties}


def rule_from_json(data: dict) -> SelectionRule:
    if not isinstance(data, dict):
        raise ValueError("rule JSON must be an object")
    if data.get("format", 1) != 1:
        raise ValueError("unsupported format version")
    try:
        n, k = int(data["n"]), int(data["k"])
        parties = []
        for entry in data["parties"]:
            if entry["kind"] == "linear":
                parties.append(
                    LinearRule(int(entry["x_mask"]), int(entry["m_mask"]), int(entry["const"]))
                )
            elif entry["kind"] == "table":
                parties.append(GeneralRule(BooleanFunction.from_text(entry["truth_table"])))
            else:
                raise ValueError(f"unknown rule kind {entry['kind']!r}")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed rule JSON: {exc}") from exc
    return SelectionRule(n, k, tuple(parties))


def report_to_json(report: PostSelectionReport) -> dict:
    return {
        "format": 1,
        "correlator": [to_jsonable(e) for e in report.correlator.entries],
        "selection_probability": [to_jsonable(p) for p in report.selection_probability],
        "kept_fraction": to_jsonable(report.kept_fraction),
    }
