"""Request and response payloads for the HTTP service.

Numeric values follow the package-wide wire convention: exact rationals
as "p/q" strings, everything else as plain JSON numbers.  Structured
inputs (models, strategies, rules) are validated by the core parsers,
so these schemas only pin the transport shape.
"""

from __future__ import annotations

from pydantic import BaseModel

WireNumber = int | float | str


class HealthResponse(BaseModel):
    status: str
    version: str


class MembershipRequest(BaseModel):
    format: int = 1
    entries: list[WireNumber]
    exact: bool | None = None


class CertificatePayload(BaseModel):
    coefficients: list[WireNumber]
    bound: WireNumber
    violation: WireNumber


class MembershipResponse(BaseModel):
    format: int = 1
    status: str
    weights: list[WireNumber] | None = None
    certificate: CertificatePayload | None = None


class ApplyRequest(BaseModel):
    format: int = 1
    lhv_model: dict | None = None
    quantum_strategy: dict | None = None
    rule: dict
    allow_nonlinear: bool = False


class ClassificationPayload(BaseModel):
    kind: str
    linearity: str


class ApplyResponse(BaseModel):
    format: int = 1
    classification: ClassificationPayload
    correlator: list[WireNumber]
    selection_probability: list[WireNumber]
    kept_fraction: WireNumber


class ScenarioRequest(BaseModel):
    name: str
    seed: int | None = None
    options: dict = {}


class ScenarioListResponse(BaseModel):
    scenarios: list[str]


class EnumerateLinearRequest(BaseModel):
    arity: int


class EnumerateLinearResponse(BaseModel):
    format: int = 1
    arity: int
    functions: list[str]


class SuccessBoundRequest(BaseModel):
    function: str


class SuccessBoundResponse(BaseModel):
    format: int = 1
    function: str
    bound: WireNumber
