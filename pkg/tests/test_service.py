"""HTTP endpoints: payload round-trips and error-code mapping."""

import math

import pytest
from fastapi.testclient import TestClient

from bellscope import __version__
from bellscope.service.app import app

client = TestClient(app)

HALF_PI = math.pi / 2

GHZ_STRATEGY = {
    "format": 1,
    "n": 3,
    "state": "ghz",
    "observables": [
        {"theta0": HALF_PI, "phi0": 0.0, "theta1": HALF_PI, "phi1": 3 * HALF_PI},
        {"theta0": HALF_PI, "phi0": 0.0, "theta1": HALF_PI, "phi1": 3 * HALF_PI},
        {"theta0": HALF_PI, "phi0": 0.0, "theta1": HALF_PI, "phi1": HALF_PI},
    ],
}

MERMIN_RULE = {
    "format": 1,
    "n": 3,
    "k": 2,
    "parties": [
        {"kind": "linear", "x_mask": 1, "m_mask": 0, "const": 0},
        {"kind": "linear", "x_mask": 2, "m_mask": 0, "const": 0},
        {"kind": "linear", "x_mask": 3, "m_mask": 0, "const": 0},
    ],
}

LOOPHOLE_MODEL = {
    "format": 1,
    "n": 2,
    "support": [
        {"weight": "1/2", "a": [1, 0], "b": [0, 0]},
        {"weight": "1/2", "a": [1, 1], "b": [1, 0]},
    ],
}

NONLINEAR_RULE = {
    "format": 1,
    "n": 2,
    "k": 1,
    "parties": [
        {"kind": "table", "truth_table": "2:8"},
        {"kind": "linear", "x_mask": 0, "m_mask": 0, "const": 0},
    ],
}


def test_health():
    response = client.get("/v1/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def sum_as_fractions(values):
    from fractions import Fraction

    return sum(Fraction(str(v)) for v in values)


def test_membership_inside():
    response = client.post("/v1/membership", json={"entries": [0, 1, 1, 0]})
    assert response.status_code == 200
    doc = response.json()
    assert doc["status"] == "inside"
    assert "certificate" not in doc
    assert sum_as_fractions(doc["weights"]) == 1


def test_membership_outside_with_certificate():
    response = client.post(
        "/v1/membership", json={"entries": [0, 0, 0, 1], "exact": True}
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["status"] == "outside"
    assert doc["certificate"]["violation"] == 1
    assert "weights" not in doc


def test_membership_bad_entry_is_400():
    response = client.post("/v1/membership", json={"entries": [0, 0, 0, 1.5]})
    assert response.status_code == 400
    assert "1.5" in response.json()["detail"]


def test_membership_bad_length_is_400():
    response = client.post("/v1/membership", json={"entries": [0, 0, 1]})
    assert response.status_code == 400


def test_membership_malformed_body_is_422():
    response = client.post("/v1/membership", json={"entries": "nope"})
    assert response.status_code == 422


def test_apply_quantum_ghz():
    response = client.post(
        "/v1/apply", json={"quantum_strategy": GHZ_STRATEGY, "rule": MERMIN_RULE}
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["classification"] == {"kind": "sp", "linearity": "linear"}
    correlator = doc["correlator"]
    assert correlator[3] == pytest.approx(1.0, abs=1e-9)
    for x in range(3):
        assert correlator[x] == pytest.approx(0.0, abs=1e-9)
    assert all(p == pytest.approx(0.125, abs=1e-12) for p in doc["selection_probability"])


def test_apply_lhv_exact_wire_format():
    identity_rule = {
        "format": 1,
        "n": 2,
        "k": 2,
        "parties": [
            {"kind": "linear", "x_mask": 1, "m_mask": 0, "const": 0},
            {"kind": "linear", "x_mask": 2, "m_mask": 0, "const": 0},
        ],
    }
    response = client.post(
        "/v1/apply", json={"lhv_model": LOOPHOLE_MODEL, "rule": identity_rule}
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["correlator"] == ["1/2", "1/2", 0, 1]
    assert doc["kept_fraction"] == "1/4"


def test_apply_requires_exactly_one_source():
    response = client.post("/v1/apply", json={"rule": MERMIN_RULE})
    assert response.status_code == 400
    response = client.post(
        "/v1/apply",
        json={
            "lhv_model": LOOPHOLE_MODEL,
            "quantum_strategy": GHZ_STRATEGY,
            "rule": MERMIN_RULE,
        },
    )
    assert response.status_code == 400


def test_apply_nonlinear_refused_with_409():
    response = client.post(
        "/v1/apply", json={"lhv_model": LOOPHOLE_MODEL, "rule": NONLINEAR_RULE}
    )
    assert response.status_code == 409
    detail = response.json()["detail"]
    assert detail["classification"] == {"kind": "sop", "linearity": "nonlinear"}


def test_apply_nonlinear_allowed_with_flag():
    response = client.post(
        "/v1/apply",
        json={
            "lhv_model": LOOPHOLE_MODEL,
            "rule": NONLINEAR_RULE,
            "allow_nonlinear": True,
        },
    )
    assert response.status_code == 200
    assert response.json()["classification"]["linearity"] == "nonlinear"


def test_apply_zero_selection_reports_x():
    copy_model = {
        "format": 1,
        "n": 2,
        "support": [{"weight": 1, "a": [1, 1], "b": [0, 0]}],
    }
    cyclic_rule = {
        "format": 1,
        "n": 2,
        "k": 1,
        "parties": [
            {"kind": "linear", "x_mask": 0, "m_mask": 1, "const": 0},
            {"kind": "linear", "x_mask": 0, "m_mask": 1, "const": 1},
        ],
    }
    response = client.post(
        "/v1/apply", json={"lhv_model": copy_model, "rule": cyclic_rule}
    )
    assert response.status_code == 400
    assert "x=0" in response.json()["detail"]


def test_scenario_runs_and_reports():
    response = client.post(
        "/v1/scenario", json={"name": "theorem1", "seed": 7, "options": {"n": 2}}
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["passed"] is True
    assert doc["seed"] == 7
    assert doc["inputs"]["n"] == 2


def test_scenario_unknown_is_404_with_listing():
    response = client.post("/v1/scenario", json={"name": "bogus"})
    assert response.status_code == 404
    detail = response.json()["detail"]
    assert "theorem1" in detail["scenarios"]


def test_scenario_bad_option_is_400():
    response = client.post(
        "/v1/scenario", json={"name": "detection-loophole", "options": {"n": 3}}
    )
    assert response.status_code == 400


def test_scenario_listing():
    response = client.get("/v1/scenarios")
    assert response.status_code == 200
    assert "sop-search-n2" in response.json()["scenarios"]


def test_enumerate_linear():
    response = client.post("/v1/enumerate-linear", json={"arity": 2})
    assert response.status_code == 200
    doc = response.json()
    assert doc["arity"] == 2
    assert len(doc["functions"]) == 8
    assert len(set(doc["functions"])) == 8


def test_enumerate_linear_bad_arity():
    response = client.post("/v1/enumerate-linear", json={"arity": 0})
    assert response.status_code == 400


def test_success_bound():
    response = client.post("/v1/success-bound", json={"function": "2:8"})
    assert response.status_code == 200
    assert response.json()["bound"] == "3/4"


def test_success_bound_linear():
    response = client.post("/v1/success-bound", json={"function": "2:6"})
    assert response.status_code == 200
    assert response.json()["bound"] == 1


def test_success_bound_malformed_function():
    response = client.post("/v1/success-bound", json={"function": "2:zz"})
    assert response.status_code == 400
