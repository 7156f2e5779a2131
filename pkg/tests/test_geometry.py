"""Polytope membership, separation certificates, and classical bounds."""

from fractions import Fraction

import pytest

from bellscope.boolfn import BooleanFunction, enumerate_linear
from bellscope.geometry import (
    CorrelatorVector,
    agreement,
    membership,
    membership_from_json,
    membership_to_json,
    success_bound,
    success_bound_lp,
    vector_from_json,
    vector_to_json,
    vertex,
    violation_magnitude,
)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def assert_valid_certificate(cert, p: CorrelatorVector) -> None:
    """The inequality must hold at every polytope vertex and fail at p."""
    for f in enumerate_linear(p.k):
        assert dot(cert.coefficients, vertex(f).entries) <= cert.bound + 1e-9
    assert dot(cert.coefficients, p.entries) > cert.bound


def test_vertex_entries_are_function_values():
    f = BooleanFunction.from_values(2, (0, 1, 1, 0))
    assert vertex(f).entries == (0, 1, 1, 0)


def test_vertices_inside_k_up_to_4():
    """Every affine function's correlator vector is a polytope member."""
    for k in (1, 2, 3, 4):
        for f in enumerate_linear(k):
            assert membership(vertex(f)).inside


def test_nonlinear_outside_exhaustive_k3():
    """All 256 - 16 nonlinear functions at k = 3 sit outside, and every
    linear one sits inside; membership decides linearity exactly."""
    linear_tables = {f.table for f in enumerate_linear(3)}
    assert len(linear_tables) == 16
    for table in range(256):
        f = BooleanFunction(3, table)
        result = membership(vertex(f))
        assert result.inside == (table in linear_tables)


def test_inside_weights_reconstruct_vector():
    """Returned weights are a convex combination giving back the query."""
    p = CorrelatorVector(
        2, (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    )
    result = membership(p)
    assert result.inside
    weights = result.weights
    vertices = [vertex(f).entries for f in enumerate_linear(2)]
    assert sum(weights) == 1
    for i in range(4):
        assert sum(w * v[i] for w, v in zip(weights, vertices)) == p.entries[i]


def test_outside_certificate_is_separating():
    and2 = BooleanFunction.from_values(2, (0, 0, 0, 1))
    result = membership(vertex(and2))
    assert not result.inside
    assert_valid_certificate(result.certificate, vertex(and2))


def test_certificate_normalization_and_value_for_and2():
    """Frozen regression: the AND vertex violates its separating
    inequality by exactly 1 after max-coefficient normalization."""
    result = membership(vertex(BooleanFunction.from_values(2, (0, 0, 0, 1))), exact=True)
    cert = result.certificate
    assert max(abs(c) for c in cert.coefficients) == 1
    assert cert.violation == 1


def test_violation_magnitude_inside_is_zero():
    f = enumerate_linear(2)[0]
    assert violation_magnitude(vertex(f)) == 0


def test_violation_magnitude_and2_regression():
    and2 = BooleanFunction.from_values(2, (0, 0, 0, 1))
    assert violation_magnitude(vertex(and2)) == 1


def test_exact_and_float_membership_agree():
    """Both arithmetic paths classify all 2-bit function vertices alike."""
    for table in range(16):
        p = vertex(BooleanFunction(2, table))
        assert membership(p, exact=True).inside == membership(p, exact=False).inside


def test_midpoint_of_two_vertices_is_inside():
    fs = enumerate_linear(2)
    a, b = vertex(fs[1]).entries, vertex(fs[2]).entries
    mid = CorrelatorVector(2, tuple((x + y) / 2 for x, y in zip(a, b)))
    assert membership(mid).inside


def test_point_near_vertex_but_outside_detected():
    """Pull a nonlinear vertex slightly toward the cube center; it stays
    outside until mixed halfway with uniform noise."""
    and2 = vertex(BooleanFunction.from_values(2, (0, 0, 0, 1))).entries
    uniform = (Fraction(1, 2),) * 4
    for lam, expect_inside in [(Fraction(9, 10), False), (Fraction(1, 2), True)]:
        p = CorrelatorVector(
            2, tuple(lam * a + (1 - lam) * u for a, u in zip(and2, uniform))
        )
        assert membership(p, exact=True).inside == expect_inside


def test_entries_validated():
    with pytest.raises(ValueError):
        CorrelatorVector(1, (Fraction(3, 2), Fraction(0)))
    with pytest.raises(ValueError):
        CorrelatorVector(1, (-0.5, 0.0))


def test_float_dust_clamped():
    p = CorrelatorVector(1, (1.0 + 5e-10, -5e-10))
    assert p.entries == (1.0, 0.0)


def test_success_bound_and2():
    and2 = BooleanFunction.from_values(2, (0, 0, 0, 1))
    assert success_bound(and2) == Fraction(3, 4)


def test_success_bound_triple_and():
    and3 = BooleanFunction.from_callable(3, lambda x: int(x == 0b111))
    assert success_bound(and3) == Fraction(7, 8)


def test_success_bound_linear_is_one():
    for f in enumerate_linear(3):
        assert success_bound(f) == 1


def test_success_bound_lp_agrees_with_enumeration():
    """LP over the polytope and exhaustive agreement counting give the
    same ceiling for every 2-bit function."""
    for table in range(16):
        f = BooleanFunction(2, table)
        assert success_bound_lp(f) == success_bound(f)


def test_agreement_definition():
    f = BooleanFunction.from_values(2, (0, 0, 0, 1))
    g = BooleanFunction.from_values(2, (0, 0, 1, 1))
    assert agreement(vertex(g), f) == Fraction(3, 4)
    assert agreement(vertex(f), f) == 1


def test_vector_json_round_trip():
    p = CorrelatorVector(2, (Fraction(1, 3), Fraction(0), Fraction(1), Fraction(1, 2)))
    data = vector_to_json(p)
    assert data == ["1/3", 0, 1, "1/2"]
    assert vector_from_json(data) == p
    assert vector_from_json({"format": 1, "entries": data}) == p


def test_vector_json_rejects_bad_length():
    with pytest.raises(ValueError):
        vector_from_json([0, 1, 0])


def test_membership_json_round_trip_inside():
    result = membership(vertex(enumerate_linear(2)[3]), exact=True)
    data = membership_to_json(result)
    back = membership_from_json(data)
    assert back.status == result.status
    assert back.weights == result.weights


def test_membership_json_round_trip_outside():
    result = membership(vertex(BooleanFunction.from_values(2, (0, 0, 0, 1))), exact=True)
    data = membership_to_json(result)
    back = membership_from_json(data)
    assert back.certificate == result.certificate


def test_membership_deterministic():
    """Same query twice gives identical results, including certificate."""
    p = vertex(BooleanFunction.from_values(3, (0, 1, 1, 1, 1, 1, 1, 0)))
    first = membership(p, exact=True)
    second = membership(p, exact=True)
    assert membership_to_json(first) == membership_to_json(second)
