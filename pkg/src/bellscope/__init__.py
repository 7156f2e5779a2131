"""Multi-party CHSH correlation toolkit.

Models binary-setting, binary-outcome experiments as stochastic maps,
decides membership in the local polytope by LP with certificates,
simulates small quantum strategies exactly, and analyses post-selection
rules that condition settings on inputs and other parties' outcomes.
"""

__version__ = "0.1.0"

from .boolfn import AnfForm, BitString, BooleanFunction, enumerate_linear, linear_function
from .geometry import (
    Certificate,
    CorrelatorVector,
    MembershipResult,
    agreement,
    membership,
    success_bound,
    success_bound_lp,
    vertex,
    violation_magnitude,
)
from .lhv import (
    DeterministicStrategy,
    LhvModel,
    enumerate_strategies,
    global_function,
    joint_table,
)
from .postselect import (
    GeneralRule,
    LinearRule,
    PostSelectionReport,
    SelectionRule,
    ZeroSelectionError,
    apply,
    apply_predicate,
    classify,
    dependence_order,
    is_feedforward,
    lhv_invariance_witness,
    outcome_readers,
)
from .quantum import (
    ObservablePair,
    PureState,
    QuantumStrategy,
    correlator_vector,
    ghz_state,
    tensor_product,
)
from .tables import ConditionalTable
from .scenarios import SCENARIOS, ScenarioReport, SearchConfig, run_scenario

__all__ = [
    "AnfForm",
    "BitString",
    "BooleanFunction",
    "Certificate",
    "ConditionalTable",
    "CorrelatorVector",
    "DeterministicStrategy",
    "GeneralRule",
    "LhvModel",
    "LinearRule",
    "MembershipResult",
    "ObservablePair",
    "PostSelectionReport",
    "PureState",
    "QuantumStrategy",
    "SCENARIOS",
    "ScenarioReport",
    "SearchConfig",
    "SelectionRule",
    "ZeroSelectionError",
    "agreement",
    "apply",
    "apply_predicate",
    "classify",
    "correlator_vector",
    "dependence_order",
    "enumerate_linear",
    "enumerate_strategies",
    "ghz_state",
    "global_function",
    "is_feedforward",
    "joint_table",
    "lhv_invariance_witness",
    "linear_function",
    "membership",
    "outcome_readers",
    "run_scenario",
    "success_bound",
    "success_bound_lp",
    "tensor_product",
    "vertex",
    "violation_magnitude",
]
