from fractions import Fraction
from itertools import product

import pytest

from pitkit.circuit import Circuit, LinearForm, MultiplicationTerm
from pitkit.corpus import f2_identity, random_circuit
from pitkit.exceptions import FieldTooSmall, OracleError
from pitkit.field import GF, QQ, ensure_min_size
from pitkit.hitting import (blackbox_test, circuit_oracle, hitting_set, hitting_set_size, required_size,
                            schwartz_zippel_test, whitebox_test)
from pitkit.reduce import ReductionMap
from pitkit.rng import StableRng

F101 = GF(101)


def power_of_first_variable(field, n, d):
    x1 = LinearForm.variable(field, n, 0)
    return Circuit(field, n, d, 1, [MultiplicationTerm(field, 1, [x1] * d)])


@pytest.mark.parametrize("k,d,n,expected", [(1, 1, 1, 4), (2, 3, 4, 784), (3, 4, 5, 22625)])
def test_stream_length_matches_size_law(k, d, n, expected):
    field, _ = ensure_min_size(F101, required_size(k, d, n))
    assert hitting_set_size(k, d, n) == expected
    assert sum(1 for _ in hitting_set(k, d, n, field)) == expected


@pytest.mark.parametrize("field,k,d,n", [(F101, 2, 3, 4), (GF(2, 6), 2, 2, 3), (QQ, 2, 2, 3), (GF(3, 4), 3, 1, 3)])
def test_points_recompute_from_provenance(field, k, d, n):
    count = 0
    for pt in hitting_set(k, d, n, field):
        assert len(pt.delta) == n and len(pt.gamma) == k
        assert pt.is_consistent()
        count += 1
    assert count == hitting_set_size(k, d, n)


def test_circuit_at_delta_equals_reduced_circuit_at_gamma():
    rng = StableRng(5)
    for field in (F101, GF(2, 6), QQ):
        C = random_circuit(rng, field, 2, 2, 3)
        big, emb = ensure_min_size(field, required_size(2, 2, 3))
        L = C.lift(emb)
        reduced = {}
        for pt in hitting_set(2, 2, 3, big):
            if pt.beta not in reduced:
                reduced[pt.beta] = ReductionMap(big, pt.beta, 3, 2).apply_circuit(L)
            assert L.evaluate_raw(pt.delta) == reduced[pt.beta].evaluate_raw(pt.gamma)


def test_beta_and_gamma_follow_enumeration_and_odometer_order():
    pts = list(hitting_set(2, 1, 1, F101))
    T = F101.first(2)
    grid = list(product(T, repeat=2))
    betas = F101.first(5)
    assert [(p.beta, p.gamma) for p in pts] == [(b, g) for b in betas for g in grid]


def test_two_streams_are_identical():
    field = GF(101, 2)
    a = list(hitting_set(3, 2, 6, field))
    b = list(hitting_set(3, 2, 6, field))
    assert a == b


def test_field_too_small_is_rejected():
    with pytest.raises(FieldTooSmall):
        next(hitting_set(3, 2, 2, GF(2)))
    with pytest.raises(FieldTooSmall):
        next(hitting_set(1, 1, 2, GF(2)))


def test_f2_identity_is_zero_after_lifting():
    C = f2_identity()
    v = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
    assert v.outcome == "zero" and v.witness is None
    assert v.field.order == 64
    assert v.points_evaluated == hitting_set_size(3, 2, 2) == 999


@pytest.mark.parametrize("field", [F101, GF(2), GF(2, 3), QQ])
def test_power_of_a_variable_is_nonzero_with_replayable_witness(field):
    C = power_of_first_variable(field, 3, 3)
    oracle = circuit_oracle(C)
    v = blackbox_test(oracle, C.k, C.d, C.n, C.field)
    assert v.outcome == "nonzero"
    assert v.replay(oracle)
    assert v.witness.is_consistent()
    delta1 = v.witness.delta[0]
    assert v.value.raw == v.field.pow(delta1, 3) != 0


def test_constant_zero_oracle_is_zero():
    v = blackbox_test(lambda point: 0, 2, 2, 2, F101)
    assert v.is_zero and v.points_evaluated == hitting_set_size(2, 2, 2)


def test_plain_callable_oracle_receives_field_elements():
    seen = []

    def oracle(point):
        seen.append(point)
        return point[0] * point[1]

    v = blackbox_test(oracle, 1, 2, 2, F101)
    assert v.outcome == "nonzero"
    assert all(x.field == F101 for x in seen[0])


def test_oracle_failures_become_oracle_error():
    def broken(point):
        raise ValueError("boom")

    with pytest.raises(OracleError):
        blackbox_test(broken, 1, 1, 2, F101)
    with pytest.raises(OracleError):
        blackbox_test(lambda point: "not a number", 1, 1, 2, F101)


def test_whitebox_matches_blackbox_exactly():
    rng = StableRng(11)
    for field in (F101, GF(2), GF(2, 3), QQ):
        for k in (1, 2, 3):
            C = random_circuit(rng, field, k, 2, 3)
            black = blackbox_test(circuit_oracle(C), C.k, C.d, C.n, C.field)
            white = whitebox_test(C)
            assert black.outcome == white.outcome
            assert black.points_evaluated == white.points_evaluated
            assert black.witness == white.witness
    zero = f2_identity()
    assert whitebox_test(zero).points_evaluated == blackbox_test(circuit_oracle(zero), 3, 2, 2, GF(2)).points_evaluated


def test_whitebox_on_zero_circuit():
    assert whitebox_test(f2_identity()).outcome == "zero"


def test_verdict_json_layout():
    C = power_of_first_variable(F101, 2, 2)
    doc = blackbox_test(C, 1, 2, 2, F101).to_json()
    assert doc["verdict"] == "nonzero"
    assert set(doc["witness"]) == {"beta", "gamma", "delta", "value"}
    assert doc["points_evaluated"] >= 1 and "elapsed_ms" in doc
    zero = blackbox_test(lambda p: 0, 1, 1, 1, F101).to_json()
    assert zero["verdict"] == "zero" and zero["witness"] is None


def test_product_of_two_variables_vanishes_on_five_of_nine_grid_points():
    T = F101.first(3)
    zeros = sum(1 for a, b in product(T, repeat=2) if F101.mul(a, b) == 0)
    assert zeros == 5
    assert Fraction(zeros, 9) <= Fraction(2, 3)


def test_randomized_test_on_zero_oracle_reports_bound():
    v = schwartz_zippel_test(lambda p: 0, 3, 2, 4, 10, 7, F101)
    assert v.outcome == "probably_zero" and v.is_zero
    assert v.error_bound == Fraction(1, 2) ** 10
    assert len(v.trials) == 10
    doc = v.to_json()
    assert doc["probabilistic"] is True and doc["error_bound"] == "1/1024"


def test_randomized_test_finds_nonzero_and_is_seeded():
    C = power_of_first_variable(F101, 3, 2)
    a = schwartz_zippel_test(C, 3, 2, 4, 40, 3, F101)
    b = schwartz_zippel_test(C, 3, 2, 4, 40, 3, F101)
    assert a.outcome == "nonzero" and a.replay(C)
    assert a.witness == b.witness and a.trials == b.trials


def test_randomized_test_lifts_small_fields():
    C = f2_identity()
    oracle = circuit_oracle(C, 15)
    v = schwartz_zippel_test(oracle, C.n, C.d, 16, 20, 0, GF(2))
    assert v.field.order >= 16 and v.is_zero
