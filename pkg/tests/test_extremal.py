import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from zerocert.extremal import (
    ChainConstraints,
    ExtremalProblem,
    InfeasibleProblem,
    brute_force_oracle,
    chain_equalize,
    chain_from_caps,
    exchange_property_check,
    greedy_optimize,
    lattice_error_bound,
    objective_S_prime,
)
from zerocert.kernel import eval_G

A = 25 / 7


def test_validation():
    with pytest.raises(InfeasibleProblem):
        ExtremalProblem(1.0, (0.5,), 1.0, 3.0, 0.0, 0.6)  # expB below 2/x
    with pytest.raises(InfeasibleProblem):
        ExtremalProblem(1.0, (0.2, 0.5), 1.0, A, 0.0, 0.7)  # caps increasing
    with pytest.raises(InfeasibleProblem):
        ExtremalProblem(1.0, (1.5,), 1.0, A, 0.0, 0.7)
    with pytest.raises(InfeasibleProblem):
        ExtremalProblem(1.0, (0.5,), -1.0, A, 0.0, 0.7)
    with pytest.raises(InfeasibleProblem):
        ExtremalProblem.from_dict({"d0": 1, "caps": [], "budget": 0, "expB": A, "scale": 0.7, "extra": 1})


def test_round_trip_dict():
    p = ExtremalProblem(0.6, (0.6, 0.3), 0.4, A, 0.0, 0.7)
    assert ExtremalProblem.from_dict(json.loads(json.dumps(p.to_dict()))) == p


def test_cost_and_inverse():
    p = ExtremalProblem(0.631, (0.631,), 1.0, A, 0.0, 0.7)
    assert p.cost(0.0) == 0.0
    assert p.solve_distance(p.cost(0.4)) == pytest.approx(0.4, abs=1e-10)


def test_greedy_saturates_in_order():
    p = ExtremalProblem(0.631, (0.631, 0.631, 0.609, 0.609), 1.0, A, 0.0, 0.7)
    c = greedy_optimize(p)
    assert c.values[:3] == [0.631, 0.631, 0.609]
    assert c.solved_index == 3 and 0 < c.values[3] < 0.609
    assert c.budget_used == pytest.approx(1.0, abs=1e-9)


def test_greedy_all_caps_fit():
    p = ExtremalProblem(0.6, (0.3, 0.2), 10.0, A, 0.0, 0.7)
    c = greedy_optimize(p)
    assert c.values == [0.3, 0.2] and c.solved_index is None


def test_objective_S_prime():
    p = ExtremalProblem(0.6, (0.3,), 10.0, A, 0.0, 0.7)
    c = greedy_optimize(p)
    assert objective_S_prime(c, 1.311, A) == pytest.approx(math.exp(-A * (1.311 - 0.3)) - math.exp(-A * 1.311))


@st.composite
def problems(draw, max_slots=3):
    x = draw(st.floats(0.6, 1.5))
    d0 = draw(st.floats(0.3, 1.0))
    caps = sorted(draw(st.lists(st.floats(0.0, d0), min_size=1, max_size=max_slots)), reverse=True)
    total = sum(float(eval_G((d0 - c) / x)) - float(eval_G(d0 / x)) for c in caps)
    frac = draw(st.floats(0.0, 1.2))
    return ExtremalProblem(d0, tuple(caps), frac * total, A, 0.0, x)


@given(problems())
def test_greedy_dominates_oracle(p):
    assert greedy_optimize(p).objective >= brute_force_oracle(p, 0.05).objective - 1e-9


@given(problems())
def test_greedy_within_lattice_error_of_oracle(p):
    g = greedy_optimize(p).objective
    o = brute_force_oracle(p, 0.05).objective
    assert g - o <= lattice_error_bound(p, 0.05) + 1e-9


@given(problems(max_slots=5))
def test_chain_agrees_with_greedy(p):
    g = greedy_optimize(p)
    c = chain_equalize(chain_from_caps(p), p.expB, p.expC)
    padded = c.values + [0.0] * (len(g.values) - len(c.values))
    assert np.allclose(g.values, padded, atol=1e-8)


def test_chain_validation():
    with pytest.raises(ValueError):
        ChainConstraints((0.5, 0.4), 0.6, 0.7)
    with pytest.raises(ValueError):
        ChainConstraints((0.1, 0.5), 0.6, 0.7)  # increments grow
    assert ChainConstraints((0.1, -1.0, 0.3), 0.6, 0.7).c == (0.1,)


def test_oracle_guards():
    with pytest.raises(ValueError):
        brute_force_oracle(ExtremalProblem(0.6, (0.5,) * 5, 1.0, A, 0.0, 0.7))
    with pytest.raises(ValueError):
        brute_force_oracle(ExtremalProblem(0.9, (0.9,) * 4, 1.0, A, 0.0, 0.7), step=1e-3)


def test_case1_configuration():
    from zerocert.cases import LOW_CASES, low_sum_greedy

    low = low_sum_greedy(LOW_CASES[1])
    assert [round(v, 6) for v in low.configuration[:8]] == [0.68] * 2 + [0.702] * 6
    assert low.solved_lambda == pytest.approx(0.995293, abs=1e-5)
    assert low.value == pytest.approx(0.610590, abs=1e-6)


@given(st.floats(1.01, 5), st.floats(0, 5), st.floats(0.001, 1), st.floats(0.05, 0.95),
       st.floats(1.05, 5), st.floats(0, 1))
def test_exchange_signs(z, gap, frac, v, b, c):
    assume(c < b - 0.01)
    eta = frac * (z - 1) * 0.999
    assume(eta > 1e-6)
    s1, s2 = exchange_property_check(z + gap, z, eta, v, b, c)
    assert (s1, s2) == (-1, 1)


def test_exchange_degenerate_linear_case():
    assert exchange_property_check(2.0, 1.5, 0.2, 0.5, 1.0, 0.0)[1] == 0
    with pytest.raises(ValueError):
        exchange_property_check(1.0, 2.0, 0.1, 0.5, 2.0, 0.0)
