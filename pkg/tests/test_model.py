import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bosonladder.model import (ModelError, describe, from_spec, make_custom, make_k_photon,
                               make_multi_mode, make_three_mode, make_two_mode)

from conftest import builtin_models


def test_two_mode_hand_values():
    m = make_two_mode(1, 2, 3, 0)
    assert m.N == 3
    assert m.betas == (6, 24, 30, 0)


def test_vacuum_subspace():
    m = make_two_mode(1, 1, 0, 0)
    assert m.N == 0 and m.betas == (0,)


def test_multi_mode_reduces_to_three_mode_formula():
    for N in range(12):
        m = make_multi_mode(1, [1, 1], [0, 0], N)
        assert m.betas == tuple((N - n) * (n + 1) ** 2 for n in range(N + 1))
        assert make_three_mode(N).betas == m.betas


def test_multi_mode_pump_power_two():
    m = make_multi_mode(2, [1], [0], 5)
    assert m.N == 2
    assert m.betas == (20, 12, 0)


@pytest.mark.parametrize("k,N,expected", [
    (1, 2, (2, 2, 0)),
    (2, 2, (4, 12, 0)),
    (1, 0, (0,)),
])
def test_k_photon_hand_values(k, N, expected):
    assert make_k_photon(k, N).betas == expected


def test_k_photon_matches_two_mode_table():
    for k in range(1, 6):
        for N in range(51):
            assert make_k_photon(k, N).betas == make_two_mode(1, k, N, 0).betas


@given(st.integers(1, 4), st.lists(st.tuples(st.integers(1, 4), st.integers(0, 3)), min_size=1,
                                    max_size=3), st.integers(0, 40))
def test_builtin_invariants(m, kl, M):
    ks = [k for k, _ in kl]
    ells = [min(ell, k - 1) for k, ell in kl]
    model = make_multi_mode(m, ks, ells, M)
    assert model.N == M // m
    assert model.betas[-1] == 0
    assert all(type(b) is int for b in model.betas)
    assert all(b > 0 for b in model.betas[:-1])
    assert not model.reducible


def test_single_signal_mode_equals_two_mode():
    for k in (1, 2, 3):
        for ell in range(k):
            for M in range(0, 15):
                assert make_multi_mode(1, [k], [ell], M).betas == make_two_mode(1, k, M, ell).betas


def test_custom_two_level():
    m = make_custom([1, 0])
    assert m.N == 1 and m.family == "custom" and not m.reducible


def test_custom_matches_builtin():
    assert make_custom([2, 2, 0]).betas == make_k_photon(1, 2).betas


def test_custom_rational_and_strings():
    m = make_custom(["1/3", "2.5", Fraction(7, 2), 0])
    assert m.betas == (Fraction(1, 3), Fraction(5, 2), Fraction(7, 2), 0)
    assert not m.inexact
    assert make_custom([0.5, 0]).inexact


@pytest.mark.parametrize("betas", [[1, -1, 0], [1, 1], [], ["x", 0]])
def test_custom_rejects_bad_sequences(betas):
    with pytest.raises(ModelError):
        make_custom(betas)


def test_custom_reducible_flag():
    assert make_custom([1, 0, 2, 0]).reducible


@pytest.mark.parametrize("call", [
    lambda: make_two_mode(1, 2, 3, 2),
    lambda: make_two_mode(1, 2, -1, 0),
    lambda: make_multi_mode(1, [1, 2], [0], 3),
    lambda: make_multi_mode(1, [2], [5], 3),
])
def test_constructor_errors(call):
    with pytest.raises(ModelError):
        call()


def test_model_is_hashable_and_immutable():
    m = make_k_photon(2, 4)
    assert hash(m) == hash(make_k_photon(2, 4))
    with pytest.raises(AttributeError):
        m.betas = (1, 0)


@pytest.mark.parametrize("model", builtin_models(6, sparse=True) + [make_custom(["1/2", "3", 0])])
def test_spec_round_trip(model):
    again = from_spec(json.dumps(describe(model)))
    assert again == model
    assert from_spec(model.to_spec()) == model


def test_from_spec_examples():
    assert from_spec('{"family":"custom","betas":["2","2","0"]}').betas == (2, 2, 0)
    m = from_spec({"family": "two_mode", "params": {"m": 1, "k": 2, "M": 3, "ell": 0}})
    assert m.betas == (6, 24, 30, 0)


@pytest.mark.parametrize("text", [
    "not json", "[1,2]", '{"family":"k_photon"}', '{"family":"k_photon","params":{"k":1}}',
    '{"family":"custom"}', '{"family":"what","params":{}}',
])
def test_from_spec_errors(text):
    with pytest.raises(ModelError):
        from_spec(text)
