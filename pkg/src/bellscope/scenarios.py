"""Canned end-to-end experiments with self-checking reports.

Each scenario builds its inputs, computes the quantities of interest,
and compares them against independently justified expectations (noted
per check in `provenance`).  Reports are deterministic for a given seed;
`canonical_json` excludes the wall-clock duration so byte-identity can
be asserted across runs.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import search
from .boolfn import BooleanFunction, linear_function
from .geometry import agreement, membership, success_bound, success_bound_lp, vertex
from .jsonnum import to_jsonable
from .lhv import (
    DeterministicStrategy,
    LhvModel,
    enumerate_strategies,
    global_function,
    joint_table,
    model_to_json,
)
from .postselect import (
    LinearRule,
    SelectionRule,
    ZeroSelectionError,
    apply,
    apply_predicate,
    rule_to_json,
)
from .quantum import (
    ObservablePair,
    PureState,
    QuantumStrategy,
    correlator_vector,
    ghz_state,
    joint_table as quantum_table,
    pair_xy,
    strategy_to_json,
    tensor_product,
)

DEFAULT_SEED = 0x5EEDB311
TSIRELSON_SUCCESS = (2 + math.sqrt(2)) / 4

AND2 = BooleanFunction.from_values(2, (0, 0, 0, 1))
AND3 = BooleanFunction.from_callable(3, lambda x: int(x == 0b111))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: object
    actual: object
    tolerance: object
    provenance: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "provenance": self.provenance,
        }


@dataclass
class ScenarioReport:
    scenario: str
    seed: int
    inputs: dict
    checks: tuple[Check, ...]
    details: dict = field(default_factory=dict)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = self.canonical_dict()
        out["duration_s"] = self.duration_s
        return out

    def canonical_dict(self) -> dict:
        return {
            "format": 1,
            "scenario": self.scenario,
            "seed": self.seed,
            "passed": self.passed,
            "inputs": self.inputs,
            "checks": [c.to_json() for c in self.checks],
            "details": self.details,
        }

    def canonical_json(self) -> str:
        """Duration-free serialization; byte-identical across runs."""
        return json.dumps(self.canonical_dict(), sort_keys=True)


@dataclass(frozen=True)
class SearchConfig:
    """Budget knobs for the derivative-free strategy searches."""

    restarts: int = 1
    anchor_restarts: int = 12
    rounds: int = 8
    golden_iters: int = 12
    initial_step: float = 1.5
    shrink: float = 0.6
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if min(self.restarts, self.anchor_restarts, self.rounds, self.golden_iters) < 1:
            raise ValueError("search budgets must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")


def _check_exact(name: str, expected, actual, provenance: str) -> Check:
    return Check(
        name=name,
        passed=expected == actual,
        expected=to_jsonable(expected) if not isinstance(expected, (list, str, bool)) else expected,
        actual=to_jsonable(actual) if not isinstance(actual, (list, str, bool)) else actual,
        tolerance="exact",
        provenance=provenance,
    )


def _check_close(name: str, expected: float, actual: float, tol: float, provenance: str) -> Check:
    return Check(
        name=name,
        passed=abs(actual - expected) <= tol,
        expected=expected,
        actual=actual,
        tolerance=tol,
        provenance=provenance,
    )


def _check_le(name: str, actual: float, bound: float, provenance: str) -> Check:
    return Check(
        name=name,
        passed=actual <= bound,
        expected=f"<= {bound}",
        actual=actual,
        tolerance=0,
        provenance=provenance,
    )


def run_theorem1(seed: int = DEFAULT_SEED, n: int = 3) -> ScenarioReport:
    """Every deterministic strategy's parity map is linear, and all
    2^(n+1) linear maps occur: enumerated against the closed form."""
    if not 1 <= n <= 4:
        raise ValueError("party count must be in 1..4")
    start = time.perf_counter()
    strategies = enumerate_strategies(n)
    image = {global_function(s) for s in strategies}
    expected = {linear_function(n, a, b) for a in range(1 << n) for b in (0, 1)}
    brute = {
        BooleanFunction.from_callable(n, lambda s, strat=strat: (strat.outcomes(s).bit_count() & 1))
        for strat in strategies
    }
    checks = (
        _check_exact(
            "strategy-count",
            4 ** n,
            len(strategies),
            "counting per-party response pairs",
        ),
        _check_exact(
            "parity-image-is-linear-set",
            True,
            image == expected,
            "exhaustive enumeration over deterministic strategies",
        ),
        _check_exact(
            "closed-form-matches-bruteforce",
            True,
            image == brute,
            "independent truth-table evaluation of each strategy",
        ),
        _check_exact(
            "image-size",
            1 << (n + 1),
            len(image),
            "exhaustive enumeration over deterministic strategies",
        ),
    )
    report = ScenarioReport(
        scenario="theorem1",
        seed=seed,
        inputs={"n": n},
        checks=checks,
        details={"image": sorted(f.to_text() for f in image)},
    )
    report.duration_s = time.perf_counter() - start
    return report


def detection_loophole_model() -> LhvModel:
    """Shared coin t; party 1 reports s1 XOR t, party 2 reports t AND s2."""
    half = Fraction(1, 2)
    return LhvModel(
        2,
        (
            (half, DeterministicStrategy(2, (1, 0), (0, 0))),
            (half, DeterministicStrategy(2, (1, 1), (1, 0))),
        ),
    )


def run_detection_loophole(seed: int = DEFAULT_SEED) -> ScenarioReport:
    """Conditioning on party 1's outcome drags a local model outside the
    polytope: the kept parity equals AND of the settings exactly."""
    start = time.perf_counter()
    model = detection_loophole_model()
    table = joint_table(model)

    kept0 = apply_predicate(table, lambda s, m: (m & 1) == 0)
    kept1 = apply_predicate(table, lambda s, m: (m & 1) == 1)
    unconditioned = correlator_vector(table)

    and_vertex = vertex(AND2)
    conditioned_members = membership(kept0.correlator)
    unconditioned_members = membership(unconditioned)

    checks = (
        _check_exact(
            "conditioned-parity-is-and",
            list(map(to_jsonable, and_vertex.entries)),
            list(map(to_jsonable, kept0.correlator.entries)),
            "hand evaluation: kept coin value is forced to s1, so the parity is s1 AND s2",
        ),
        _check_exact(
            "kept-weight-half-per-setting",
            [to_jsonable(Fraction(1, 2))] * 4,
            list(map(to_jsonable, kept0.kept)),
            "exactly one coin value survives per setting",
        ),
        _check_exact(
            "conditioned-outside",
            "outside",
            conditioned_members.status,
            "exact-rational LP over the linear-function vertices",
        ),
        _check_exact(
            "complement-selection-parity",
            [to_jsonable(v) for v in (1, 1, 0, 1)],
            list(map(to_jsonable, kept1.correlator.entries)),
            "hand evaluation with the coin forced to NOT s1",
        ),
        _check_exact(
            "unconditioned-inside",
            "inside",
            unconditioned_members.status,
            "local mixtures never leave the polytope without conditioning",
        ),
        _check_exact(
            "classical-ceiling",
            Fraction(3, 4),
            success_bound(AND2),
            "agreement maximum over the 8 linear maps by enumeration",
        ),
        _check_exact(
            "ceiling-lp-path-agrees",
            success_bound(AND2),
            success_bound_lp(AND2),
            "exact LP over the polytope versus vertex enumeration",
        ),
    )
    report = ScenarioReport(
        scenario="detection-loophole",
        seed=seed,
        inputs={"model": model_to_json(model)},
        checks=checks,
        details={
            "conditioned_correlator": [to_jsonable(e) for e in kept0.correlator.entries],
            "certificate": {
                "coefficients": [to_jsonable(c) for c in conditioned_members.certificate.coefficients],
                "bound": to_jsonable(conditioned_members.certificate.bound),
                "violation": to_jsonable(conditioned_members.certificate.violation),
            },
        },
    )
    report.duration_s = time.perf_counter() - start
    return report


def ghz_mermin_rule() -> SelectionRule:
    """Setting-only rule s1=x1, s2=x2, s3=x1 XOR x2."""
    return SelectionRule(
        3,
        2,
        (
            LinearRule(x_mask=0b01, m_mask=0, const=0),
            LinearRule(x_mask=0b10, m_mask=0, const=0),
            LinearRule(x_mask=0b11, m_mask=0, const=0),
        ),
    )


def ghz_mermin_table():
    """GHZ triple measured X/Y, outputs of parties 1 and 2 XORed with
    their settings.  On settings with s3 = s1 XOR s2 the parity is then
    deterministically s1 AND s2."""
    raw = quantum_table(QuantumStrategy(ghz_state(3), (pair_xy(),) * 3))
    return raw.relabel_outputs(setting_mask=0b011)


def run_ghz_mermin_sp(seed: int = DEFAULT_SEED) -> ScenarioReport:
    start = time.perf_counter()
    rule = ghz_mermin_rule()
    table = ghz_mermin_table()

    float_report = apply(table, rule)
    exact_report = apply(table.snap_to_rational(), rule)

    float_err = max(
        abs(e - t) for e, t in zip(float_report.correlator.entries, AND2.values())
    )
    eighth = Fraction(1, 8)
    checks = (
        _check_close(
            "correlator-matches-and",
            0.0,
            float_err,
            1e-9,
            "exact filter on the snapped table fixes the target entries",
        ),
        _check_exact(
            "snapped-correlator-equals-and",
            [to_jsonable(v) for v in AND2.values()],
            [to_jsonable(e) for e in exact_report.correlator.entries],
            "stabilizer parity of the GHZ state under X/Y settings",
        ),
        _check_exact(
            "selection-probability-exact",
            [to_jsonable(eighth)] * 4,
            [to_jsonable(p) for p in exact_report.selection_probability],
            "three uniform setting constraints each halve the kept weight",
        ),
        _check_exact(
            "classical-ceiling",
            Fraction(3, 4),
            success_bound(AND2),
            "agreement maximum over the 8 linear maps by enumeration",
        ),
        _check_exact(
            "post-selected-agreement-is-one",
            Fraction(1),
            agreement(exact_report.correlator, AND2),
            "deterministic parity on every kept event",
        ),
    )
    report = ScenarioReport(
        scenario="ghz-mermin-sp",
        seed=seed,
        inputs={"rule": rule_to_json(rule), "state": "ghz3 with X/Y observables"},
        checks=checks,
        details={
            "float_correlator": list(float_report.correlator.entries),
            "selection_probability": [to_jsonable(p) for p in exact_report.selection_probability],
        },
    )
    report.duration_s = time.perf_counter() - start
    return report


def sixparty_rule() -> SelectionRule:
    """s1=x1, s2=x2, s3=x1^x2, s4=x3, s5=m1^m2^m3, s6=m1^m2^m3^x3^1."""
    return SelectionRule(
        6,
        3,
        (
            LinearRule(x_mask=0b001, m_mask=0, const=0),
            LinearRule(x_mask=0b010, m_mask=0, const=0),
            LinearRule(x_mask=0b011, m_mask=0, const=0),
            LinearRule(x_mask=0b100, m_mask=0, const=0),
            LinearRule(x_mask=0, m_mask=0b00111, const=0),
            LinearRule(x_mask=0b100, m_mask=0b00111, const=1),
        ),
    )


def sixparty_strategy() -> QuantumStrategy:
    """Two GHZ triples (parties 1-3 and 4-6), every party measuring X/Y."""
    return QuantumStrategy(
        tensor_product(ghz_state(3), ghz_state(3)), (pair_xy(),) * 6
    )


def sixparty_table():
    """Joint table with the calibrated relabelling conventions.

    Brute-force calibration over all 4096 (setting-invert, output-XOR)
    mask pairs shows which local relabellings make the kept parity equal
    x1*x2*x3 exactly; the frozen choice is: party 6 swaps its setting
    labels, and parties 1, 2 and 4 report m_j XOR s_j.  (The choice is
    not unique; any calibrated pair works identically.)
    """
    raw = quantum_table(sixparty_strategy())
    return raw.relabel_settings(0b100000).relabel_outputs(setting_mask=0b001011)


def run_sixparty_triple_and(seed: int = DEFAULT_SEED) -> ScenarioReport:
    start = time.perf_counter()
    rule = sixparty_rule()
    table = sixparty_table()

    float_report = apply(table, rule)
    exact_report = apply(table.snap_to_rational(), rule)

    target = tuple(Fraction(int(x == 0b111)) for x in range(8))
    float_err = max(
        abs(e - float(t)) for e, t in zip(float_report.correlator.entries, target)
    )
    sixty_fourth = Fraction(1, 64)
    checks = (
        _check_close(
            "correlator-matches-triple-and",
            0.0,
            float_err,
            1e-9,
            "exact filter on the snapped table fixes the target entries",
        ),
        _check_exact(
            "snapped-correlator-equals-triple-and",
            [to_jsonable(t) for t in target],
            [to_jsonable(e) for e in exact_report.correlator.entries],
            "GHZ parity identities chained through the outcome-driven settings",
        ),
        _check_exact(
            "selection-probability-exact",
            [to_jsonable(sixty_fourth)] * 8,
            [to_jsonable(p) for p in exact_report.selection_probability],
            "six uniform setting constraints each halve the kept weight",
        ),
        _check_exact(
            "classical-ceiling",
            Fraction(7, 8),
            success_bound(AND3),
            "agreement maximum over the 16 linear maps by enumeration",
        ),
        _check_exact(
            "ceiling-lp-path-agrees",
            success_bound(AND3),
            success_bound_lp(AND3),
            "exact LP over the polytope versus vertex enumeration",
        ),
        _check_exact(
            "post-selected-agreement-is-one",
            Fraction(1),
            agreement(exact_report.correlator, AND3),
            "deterministic parity on every kept event",
        ),
    )
    report = ScenarioReport(
        scenario="sixparty-triple-and",
        seed=seed,
        inputs={
            "rule": rule_to_json(rule),
            "strategy": strategy_to_json(sixparty_strategy()),
            "relabelling": {"invert_settings": 0b100000, "xor_outputs_with_settings": 0b001011},
        },
        checks=checks,
        details={
            "selection_probability": [to_jsonable(p) for p in exact_report.selection_probability],
            "float_max_error": float_err,
        },
    )
    report.duration_s = time.perf_counter() - start
    return report


# --- two-party strategy search -------------------------------------------

_AMP_BOUNDS = [(-1.0, 1.0)] * 8
_ANGLE_BOUNDS = [(0.0, 2 * math.pi)] * 8
STRATEGY_BOUNDS = _AMP_BOUNDS + _ANGLE_BOUNDS


def strategy_from_params(params: Sequence[float]) -> QuantumStrategy | None:
    """Two-qubit strategy from 8 amplitude reals and 8 Bloch angles;
    None when the amplitude block is numerically null."""
    amps = np.array(
        [complex(params[2 * i], params[2 * i + 1]) for i in range(4)]
    )
    norm = np.linalg.norm(amps)
    if norm < 1e-9:
        return None
    state = PureState(2, amps / norm)
    obs = (
        ObservablePair(params[8], params[9], params[10], params[11]),
        ObservablePair(params[12], params[13], params[14], params[15]),
    )
    return QuantumStrategy(state, obs)


def chsh_success(strategy: QuantumStrategy) -> float:
    """Mean probability that the outcome parity equals s1 AND s2."""
    return float(agreement(correlator_vector(quantum_table(strategy)), AND2))


def _chsh_objective(params: Sequence[float]) -> float:
    strategy = strategy_from_params(params)
    if strategy is None:
        return -1.0
    return chsh_success(strategy)


def sop_templates() -> tuple[SelectionRule, ...]:
    """All 256 linear outcome-and-input selection rules at n=2, k=2."""
    party_rules = [
        LinearRule(x_mask=v, m_mask=u, const=w)
        for u in (0, 1)
        for v in range(4)
        for w in (0, 1)
    ]
    return tuple(
        SelectionRule(2, 2, (r1, r2)) for r1 in party_rules for r2 in party_rules
    )


def identity_sp_rule() -> SelectionRule:
    return SelectionRule(2, 2, (LinearRule(0b01, 0, 0), LinearRule(0b10, 0, 0)))


def post_selected_success(strategy: QuantumStrategy, rule: SelectionRule) -> float:
    """Post-selected agreement with AND; -1 when the selection dies."""
    try:
        report = apply(quantum_table(strategy), rule)
    except ZeroSelectionError:
        return -1.0
    return float(agreement(report.correlator, AND2))


def _template_objective(rule: SelectionRule) -> Callable[[Sequence[float]], float]:
    def objective(params: Sequence[float]) -> float:
        strategy = strategy_from_params(params)
        if strategy is None:
            return -1.0
        return post_selected_success(strategy, rule)

    return objective


def classical_diagonal_params() -> list[float]:
    """|00> with both observables Z for both parties: all outcomes 0."""
    return [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0] + [0.0] * 8


def run_sop_search_n2(seed: int = DEFAULT_SEED, config: SearchConfig | None = None) -> ScenarioReport:
    """Search every linear outcome-and-input selection template at n=2
    for post-selected success beyond the plain two-party optimum.

    The identity setting-only template anchors the search (it must reach
    the known optimum (2+sqrt(2))/4), and the best value over all
    templates is asserted not to exceed that optimum, confirming that
    this family of selection rules buys nothing at two parties.
    """
    start = time.perf_counter()
    cfg = config if config is not None else SearchConfig(seed=seed)
    rng = random.Random(cfg.seed)

    classical_value = _chsh_objective(classical_diagonal_params())

    anchor = search.maximize(
        _chsh_objective,
        STRATEGY_BOUNDS,
        restarts=cfg.anchor_restarts,
        rounds=cfg.rounds,
        golden_iters=cfg.golden_iters,
        initial_step=cfg.initial_step,
        shrink=cfg.shrink,
        rng=rng,
    )

    templates = sop_templates()
    best_value = float("-inf")
    best_template = -1
    total_evals = anchor.evals
    total_restarts = anchor.restarts
    for idx, rule in enumerate(templates):
        result = search.maximize(
            _template_objective(rule),
            STRATEGY_BOUNDS,
            restarts=cfg.restarts,
            rounds=cfg.rounds,
            golden_iters=cfg.golden_iters,
            initial_step=cfg.initial_step,
            shrink=cfg.shrink,
            rng=rng,
        )
        total_evals += result.evals
        total_restarts += result.restarts
        if result.value > best_value:
            best_value = result.value
            best_template = idx

    overall_best = max(best_value, anchor.value)
    checks = (
        _check_close(
            "classical-diagonal-anchor",
            0.75,
            classical_value,
            1e-12,
            "deterministic all-zero outcomes agree with AND on 3 of 4 inputs",
        ),
        _check_close(
            "identity-sp-anchor",
            TSIRELSON_SUCCESS,
            anchor.value,
            1e-4,
            "known two-party quantum optimum",
        ),
        _check_le(
            "no-selection-enhancement",
            overall_best,
            TSIRELSON_SUCCESS + 1e-3,
            "search upper-bound spot check across all linear templates",
        ),
        _check_exact(
            "restart-budget",
            True,
            total_restarts >= 100,
            "restart accounting",
        ),
    )
    report = ScenarioReport(
        scenario="sop-search-n2",
        seed=cfg.seed,
        inputs={
            "config": {
                "restarts": cfg.restarts,
                "anchor_restarts": cfg.anchor_restarts,
                "rounds": cfg.rounds,
                "golden_iters": cfg.golden_iters,
                "initial_step": cfg.initial_step,
                "shrink": cfg.shrink,
                "seed": cfg.seed,
            },
            "templates": len(templates),
        },
        checks=checks,
        details={
            "anchor_value": anchor.value,
            "best_template_value": best_value,
            "best_template": rule_to_json(templates[best_template]),
            "total_restarts": total_restarts,
            "total_evals": total_evals,
        },
    )
    report.duration_s = time.perf_counter() - start
    return report


SCENARIOS: dict[str, Callable[..., ScenarioReport]] = {
    "theorem1": run_theorem1,
    "detection-loophole": run_detection_loophole,
    "ghz-mermin-sp": run_ghz_mermin_sp,
    "sixparty-triple-and": run_sixparty_triple_and,
    "sop-search-n2": run_sop_search_n2,
}


def run_scenario(name: str, seed: int = DEFAULT_SEED, **options) -> ScenarioReport:
    if name not in SCENARIOS:
        known = ", ".join(sorted(SCENARIOS))
        raise KeyError(f"unknown scenario {name!r}; available: {known}")
    return SCENARIOS[name](seed=seed, **options)


_SEARCH_KNOBS = ("restarts", "anchor_restarts", "rounds", "golden_iters", "initial_step", "shrink")


def prepare_options(name: str, options: dict, seed: int) -> dict:
    """Translate wire-level scenario options into run kwargs."""
    options = dict(options or {})
    if name == "theorem1":
        out = {"n": int(options.pop("n"))} if "n" in options else {}
    elif name == "sop-search-n2":
        knobs = {k: options.pop(k) for k in _SEARCH_KNOBS if k in options}
        out = {"config": SearchConfig(seed=seed, **knobs)} if knobs else {}
    else:
        out = {}
    if options:
        raise ValueError(f"unknown options for scenario {name!r}: {sorted(options)}")
    return out
