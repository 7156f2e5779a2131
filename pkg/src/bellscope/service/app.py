"""HTTP facade over the core toolkit.

Stateless compute endpoints: polytope membership, rule application,
scenario runs, linear-function enumeration, and agreement ceilings.
The CLI drives this app in-process by default, so the service layer is
exercised on every invocation, not only when deployed behind uvicorn.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..boolfn import BooleanFunction, enumerate_linear
from ..geometry import membership, membership_to_json, success_bound, vector_from_json
from ..jsonnum import to_jsonable
from ..lhv import joint_table, model_from_json
from ..postselect import (
    ZeroSelectionError,
    apply,
    classify,
    rule_from_json,
)
from ..quantum import joint_table as quantum_table, strategy_from_json
from ..scenarios import DEFAULT_SEED, SCENARIOS, prepare_options, run_scenario
from .schemas import (
    ApplyRequest,
    ApplyResponse,
    EnumerateLinearRequest,
    EnumerateLinearResponse,
    HealthResponse,
    MembershipRequest,
    MembershipResponse,
    ScenarioListResponse,
    ScenarioRequest,
    SuccessBoundRequest,
    SuccessBoundResponse,
)

app = FastAPI(title="bellscope", version=__version__)


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/membership", response_model=MembershipResponse, response_model_exclude_none=True)
def membership_endpoint(request: MembershipRequest) -> MembershipResponse:
    try:
        vector = vector_from_json(request.entries)
        result = membership(vector, exact=request.exact)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return MembershipResponse(**{k: v for k, v in membership_to_json(result).items()})


@app.post("/v1/apply", response_model=ApplyResponse)
def apply_endpoint(request: ApplyRequest) -> ApplyResponse:
    if (request.lhv_model is None) == (request.quantum_strategy is None):
        raise HTTPException(
            status_code=400, detail="provide exactly one of lhv_model or quantum_strategy"
        )
    try:
        rule = rule_from_json(request.rule)
        if request.lhv_model is not None:
            table = joint_table(model_from_json(request.lhv_model))
        else:
            table = quantum_table(strategy_from_json(request.quantum_strategy))
        classification = classify(rule)
        if classification.linearity != "linear" and not request.allow_nonlinear:
            raise HTTPException(
                status_code=409,
                detail={
                    "reason": "rule is nonlinear; pass allow_nonlinear to condition anyway",
                    "classification": classification._asdict(),
                },
            )
        report = apply(table, rule)
    except ZeroSelectionError as exc:
        raise HTTPException(
            status_code=400, detail=f"selection probability is zero at x={exc.x}"
        ) from exc
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return ApplyResponse(
        classification=classification._asdict(),
        correlator=[to_jsonable(e) for e in report.correlator.entries],
        selection_probability=[to_jsonable(p) for p in report.selection_probability],
        kept_fraction=to_jsonable(report.kept_fraction),
    )


@app.post("/v1/scenario")
def scenario_endpoint(request: ScenarioRequest) -> dict:
    if request.name not in SCENARIOS:
        raise HTTPException(
            status_code=404,
            detail={
                "reason": f"unknown scenario {request.name!r}",
                "scenarios": sorted(SCENARIOS),
            },
        )
    seed = request.seed if request.seed is not None else DEFAULT_SEED
    try:
        options = prepare_options(request.name, request.options, seed)
        report = run_scenario(request.name, seed=seed, **options)
    except (ValueError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return report.to_json()


@app.get("/v1/scenarios", response_model=ScenarioListResponse)
def scenario_list() -> ScenarioListResponse:
    return ScenarioListResponse(scenarios=sorted(SCENARIOS))


@app.post("/v1/enumerate-linear", response_model=EnumerateLinearResponse)
def enumerate_linear_endpoint(request: EnumerateLinearRequest) -> EnumerateLinearResponse:
    try:
        functions = enumerate_linear(request.arity)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return EnumerateLinearResponse(
        arity=request.arity, functions=[f.to_text() for f in functions]
    )


@app.post("/v1/success-bound", response_model=SuccessBoundResponse)
def success_bound_endpoint(request: SuccessBoundRequest) -> SuccessBoundResponse:
    try:
        f = BooleanFunction.from_text(request.function)
        bound = success_bound(f)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return SuccessBoundResponse(function=request.function, bound=to_jsonable(bound))
