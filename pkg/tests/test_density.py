import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from zerocert import density
from zerocert.density import (
    STANDARD_PARAMS,
    DensityContext,
    InadmissibleContext,
    WeightParams,
    band_count_bound,
    certified_E,
    class_zero_count_bound,
    count_envelope,
    deficiency_budget,
    min_lambda_for_count,
    weighted_sum_bound,
    zero_count_bound,
)
from zerocert.facts import FACTS, fact


def mp_weighted_sum(Lambda, phi=Fraction(1, 3), c1=Fraction(1, 12), c2=Fraction(1, 4), kappa=Fraction(1, 6)):
    """Oracle written straight from the formula in 50-digit arithmetic."""
    with mpmath.workdps(50):
        phi, c1, c2, kappa = (mpmath.mpf(v.numerator) / v.denominator for v in (phi, c1, c2, kappa))
        L = mpmath.mpf(Lambda)
        B = lambda w: phi / 2 * (1 - mpmath.exp(-2 * w * L)) / L + ((1 - mpmath.exp(-w * L)) / L) ** 2
        C1 = (2 * phi + 2 * c1 + c2) / (2 * c1 * c2)
        return float(C1 * mpmath.sqrt(B(kappa) * B(phi + c1 + c2)) / kappa)


def test_params_rational():
    p = STANDARD_PARAMS
    assert p.C1 == 26
    assert p.r == Fraction(2, 3)
    assert p.growth_exponent == Fraction(8, 3)
    assert p.in_mode("class").growth_exponent == 2
    assert p.gap_exponent == Fraction(5, 12)
    assert density.rational_exponents() == {"all": Fraction(8, 3), "class": Fraction(2), "gap": Fraction(5, 12)}


def test_params_validation():
    with pytest.raises(ValueError):
        WeightParams(-1, 1, 1, 1)
    with pytest.raises(ValueError):
        WeightParams(1, 0, 1, 1)
    with pytest.raises(ValueError):
        WeightParams(1, 1, 1, 1, mode="some")


@pytest.mark.parametrize("L", [1.311, 2.421, 3.96, 5.8, 10.0])
def test_weighted_sum_matches_oracle(L):
    assert weighted_sum_bound(STANDARD_PARAMS, L) == pytest.approx(mp_weighted_sum(L), rel=1e-13)


def test_table_values_frozen():
    # recomputed values, frozen
    got = [weighted_sum_bound(STANDARD_PARAMS, fact(k)) for k in ("Lambda0", "Lambda1", "Lambda2", "Lambda3")]
    assert got == pytest.approx([22.2808691, 15.5959771, 10.3827240, 7.0794401], abs=1e-6)
    assert 7.01 < got[3]  # tabulated value for the last threshold is too small


def test_certified_E_picks_threshold_and_larger_value():
    t = certified_E(2.0)
    assert t.threshold == 1.311 and t.value == t.published == 22.281
    t = certified_E(6.6)
    assert t.threshold == 5.8 and t.value == t.computed > t.published
    with pytest.raises(ValueError):
        certified_E(1.0)


def test_count_envelope_nondecreasing_steps():
    assert count_envelope(STANDARD_PARAMS, 1.5) < count_envelope(STANDARD_PARAMS, 2.0)


def test_context_case1():
    ctx = DensityContext(0.68, 0.7, 1.311)
    assert ctx.F_neg == pytest.approx(1.5699194, abs=1e-7)
    assert ctx.xi == pytest.approx(0.0792680, abs=1e-7)
    assert ctx.delta == pytest.approx(ctx.psi - ctx.xi)
    b = deficiency_budget(ctx)
    assert b.normalized == pytest.approx((1 - ctx.xi) / (2 * ctx.delta))
    assert b.unnormalized == pytest.approx(b.normalized * ctx.F_neg)


def test_context_guards():
    with pytest.raises(InadmissibleContext):
        DensityContext(0.9, 0.7, 1.3)  # lambda0/x > 1.25
    with pytest.raises(InadmissibleContext):
        DensityContext(0.1, 0.6, 9.0)  # (L - lambda0)/x > 13
    with pytest.raises(InadmissibleContext):
        DensityContext(0.5, 0.7, 0.4)


def test_counts_and_admissibility():
    ctx = DensityContext(0.44, 0.68, 1.311)
    assert ctx.class_admissible and not ctx.count_admissible
    with pytest.raises(InadmissibleContext):
        zero_count_bound(ctx)
    with pytest.raises(InadmissibleContext):
        deficiency_budget(ctx)
    assert class_zero_count_bound(ctx) == pytest.approx(1 / ctx.delta**2)
    ok = DensityContext(0.68, 0.7, 1.311)
    assert zero_count_bound(ok) == pytest.approx((1 - ok.xi) / (ok.delta**2 - ok.xi))


def test_min_lambda_for_count_printed_values():
    got = [min_lambda_for_count(N, 6 / 7, x) for N, x in [(7, 1.58), (10, 1.66), (16, 1.68)]]
    assert got == pytest.approx([1.474616, 1.850080, 2.338466], abs=1e-5)


def test_min_lambda_errors():
    with pytest.raises(ValueError):
        min_lambda_for_count(1, 0.5, 1.0)
    with pytest.raises(InadmissibleContext):
        min_lambda_for_count(5, 1.0, 0.7)


@given(st.integers(2, 40), st.sampled_from([0.7, 1.0, 1.3, 1.6]), st.sampled_from([0.0, 0.35, 0.702]))
def test_min_lambda_is_predicate_boundary(N, x, lam0):
    try:
        L = min_lambda_for_count(N, lam0, x)
    except InadmissibleContext:
        return
    below = density._class_count_or_inf(lam0, x, L, density.PHI)
    above = density._class_count_or_inf(lam0, x, L + 1e-8, density.PHI)
    assert below < N <= above


def test_band_count_bound_tie_goes_to_smaller_scale():
    best, x = band_count_bound(2.0, 0.35, density.PHI, [1.0, 1.0, 0.9])
    assert x in (0.9, 1.0)
    best2, x2 = band_count_bound(2.0, 0.35, density.PHI, [1.0, 1.0])
    assert x2 == 1.0
    with pytest.raises(InadmissibleContext):
        band_count_bound(2.0, 1.2, density.PHI, [0.6])


def test_schedule_increasing_and_counts():
    sched = density.build_zero_schedule(6 / 7, density.default_x_grid(), upto=2.0)
    vals = [sched.bounds[N] for N in sorted(sched.bounds)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert sched.count_below(1.311) == 5
    assert sched.count_below(100.0) is None


def test_weighted_sum_table_rows():
    rows = density.weighted_sum_table()
    assert [r["id"] for r in rows] == ["E0", "E1", "E2", "E3"]
    assert all(r["citation"] == FACTS[r["id"]].citation for r in rows)
