import math

import pytest

from zerocert import cases
from zerocert.cases import (
    a_sum_bound,
    b_max_bound,
    b_total_bound,
    case7_bound,
    case8_certify,
    combine_cases_1_to_6,
    final_verdict,
)
from zerocert.density import InadmissibleContext
from zerocert.facts import fact

A = 25 / 7


@pytest.fixture(scope="module")
def recomputed():
    return cases.recompute_all()


def test_b_total():
    assert b_total_bound(1.311) == pytest.approx(22.281 * math.exp(-19 * 1.311 / 21), rel=1e-14)
    assert 6.80 <= b_total_bound(1.311) < 6.805
    assert b_total_bound(2.421) == pytest.approx(1.74516, abs=1e-4)
    with pytest.raises(ValueError):
        b_total_bound(1.0)


def test_b_max_frozen(recomputed):
    # recomputed with the default 0.6..1.7 scale grid and 0.1 bands
    assert [recomputed.tails[j] for j in (1, 2, 3, 4)] == pytest.approx(
        [0.0722323, 0.0748115, 0.0821625, 0.0737793], abs=1e-7)
    assert recomputed.tails[1] <= 0.0725


def test_b_max_breakdown_adds_up():
    tb = cases.b_max_breakdown(2)
    assert tb.total == pytest.approx(tb.below_schedule + tb.bands + tb.tail)
    assert tb.tail == pytest.approx(A * 7.0794401 / (A - 2) * math.exp(-(A - 2) * 6.4), rel=1e-6)
    # pieces tile [split, cut]
    assert tb.pieces[0][0] == pytest.approx(1.311)
    assert tb.pieces[-1][1] == pytest.approx(6.4)
    assert all(p[1] == pytest.approx(q[0]) for p, q in zip(tb.pieces, tb.pieces[1:]))


def test_b_max_decreasing_in_split():
    vals = [b_max_bound(3, s) for s in (1.311, 1.6, 2.0, 2.421)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_b_max_invalid():
    with pytest.raises(ValueError):
        b_max_bound(5)


def test_case4_isolated_zero():
    tb = cases.b_max_breakdown(4)
    assert all(n == 1 for lo, hi, n in tb.pieces if hi <= 1.42)
    assert cases.zeros_below(4, 1.4) == 1


def test_count_below_threshold_is_at_most_six():
    assert cases.zeros_below(1) == 5


def test_low_sums():
    assert a_sum_bound(1).value < 0.612
    assert a_sum_bound(2).value == pytest.approx(0.6214378, abs=1e-7)
    assert a_sum_bound(3).value == pytest.approx(0.5632107, abs=1e-7)
    assert a_sum_bound(6).value == pytest.approx(0.59727, abs=1e-5)
    assert cases.complex_pair_bound() < 0.39698
    assert a_sum_bound(7).value == pytest.approx(math.exp(-A * 0.04) - math.exp(-A * 2.421))
    with pytest.raises(ValueError):
        a_sum_bound(8)
    with pytest.raises(ValueError):
        a_sum_bound(9)


def test_low_sums_inadmissible_below_044():
    for nu in (4, 5):
        with pytest.raises(InadmissibleContext):
            a_sum_bound(nu)


def test_combiner_exact_on_published_inputs():
    c = combine_cases_1_to_6(0.622, 0.0722, 0.0751, 0.0826, 6.805)
    assert c.S_minus == pytest.approx(0.9680218, abs=1e-7)
    assert c.surplus_factor == pytest.approx(1.244 + 2 * 0.0826, abs=1e-12)
    assert c.delta1 == pytest.approx(0.0104 * 1.4092, abs=1e-12)
    assert c.delta2 == pytest.approx(4.3558e-4, abs=1e-10)
    assert c.total < 0.9832


def test_case_report_recombines():
    r = case7_bound()
    assert r.recombined() == pytest.approx(r.S_bound)
    assert r.certified


def test_case7_published_rounding():
    r = case7_bound(a_sum=fact("case7_a_sum"))
    assert r.S_bound == pytest.approx(0.99991, abs=1e-5)
    assert case7_bound().S_bound < r.S_bound


def test_case8():
    res = case8_certify()
    assert res.report.certified and res.chain_ok
    assert res.slack_ratio == pytest.approx(6.105, abs=1e-3)
    assert res.b_sum_majorant < 0.435
    assert res.cross_factor <= 2.87
    assert not res.report.uniform
    with pytest.raises(ValueError):
        case8_certify(0.05)


def test_case8_approaches_one_at_origin():
    tiny = cases.a_sum_bound(8, 1e-6).value
    assert 0.99 < tiny < 1


def test_partition_covers_half_line():
    assert cases.partition_gaps() == []
    assert cases.partition_gaps([("x", 0.0, 0.5), ("y", 0.6, math.inf)]) == [(0.5, 0.6)]


def test_verdict(recomputed):
    v = final_verdict(recomputed)
    assert v.certified
    assert v.c0 >= 9e-5
    assert float(v.exponent) == 0.72 and v.weight == 1 / v.theta
    assert set(v.chains) == {"published", "recomputed"}


def test_sensitivity_inflated_tail_breaks_verdict():
    v = final_verdict(overrides={"c1": 0.08})
    assert v.chains["published"]["1-6"].S_bound > 1
    assert not v.certified
    with pytest.raises(KeyError):
        final_verdict(overrides={"nope": 1.0})


def test_case_spec_validation():
    with pytest.raises(ValueError):
        cases.CaseSpec(1, "middle", 0.0)
    with pytest.raises(ValueError):
        cases.CaseSpec(1, "tail", 0.0)
    with pytest.raises(ValueError):
        cases.CaseSpec(1, "low", 0.0)
