import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zerocert import cond2
from zerocert.cond2 import GridRegion, cond2_slack, default_regions, psi, verify_region


def test_lattice_endpoints():
    pts = cond2._lattice(0.0, 1.0, 0.25)
    assert list(pts) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert list(cond2._lattice(0.0, 1.0, 0.25, open_hi=True)) == [0.0, 0.25, 0.5, 0.75]
    assert list(cond2._lattice(0.0, 1.0, 0.25, open_lo=True)) == [0.25, 0.5, 0.75, 1.0]
    with pytest.raises(ValueError):
        cond2._lattice(1.0, 0.0, 0.1)


def test_region_validation():
    with pytest.raises(ValueError):
        GridRegion("x", (0, 14), (0, 0.1), (1, 2))
    with pytest.raises(ValueError):
        GridRegion("x", (0, 1), (0, 2), (1, 2))
    with pytest.raises(ValueError):
        GridRegion("x", (0, 1), (0, 1), (1, 2), (0.1, 0.0, 0.1))


def test_default_region_shapes():
    regs = default_regions()
    assert set(regs) == {"1", "2", "3", "handoff"}
    a, b, t = regs["3"].axes()
    assert t[0] > math.pi / 2 and t[-1] < 8
    a, b, t = regs["1"].axes()
    assert list(a) == [0.0] and t[0] == 14.0 and t[-1] < 50


def test_slack_is_psi_difference():
    a, b, t = 0.7, 0.3, 9.1
    assert cond2_slack(a, b, t) == pytest.approx(psi(a, t) - psi(-b, t), abs=1e-15)
    assert cond2_slack(0.0, 0.0, 20.0) == 0.0


def test_separable_minimum_matches_brute_force():
    region = GridRegion("small", (0, 2), (0, 0.5), (3, 5), (0.25, 0.1, 0.25))
    cert = verify_region(region)
    a, b, t = region.axes()
    A, B, T = np.meshgrid(a, b, t, indexing="ij")
    s = cond2_slack(A, B, T)
    s[(A == 0) & (B == 0)] = np.inf
    assert cert.min_slack == s.min()
    ia, ib, it = np.unravel_index(np.argmin(s), s.shape)
    assert cert.argmin == (a[ia], b[ib], t[it])
    assert cert.trivial_points == len(t)


def test_workers_do_not_change_result():
    region = default_regions((0.1, 0.05, 0.05))["2"]
    one = verify_region(region, workers=1, chunk=17)
    three = verify_region(region, workers=3, chunk=17)
    assert (one.min_slack, one.argmin) == (three.min_slack, three.argmin)


def test_margin_controls_pass():
    region = default_regions((0.1, 0.05, 0.05))["3"]
    assert verify_region(region).passed
    cert = verify_region(region, margin=1.0)
    assert not cert.passed and cert.margin == 1.0


def test_degenerate_region_is_trivial():
    region = GridRegion("origin", (0, 0), (0, 0), (5, 6), (0.1, 0.1, 0.5))
    cert = verify_region(region)
    assert cert.trivial_points == cert.points_checked
    assert cert.min_slack == 0.0 and cert.passed
    assert not verify_region(region, margin=1e-12).passed


def test_coarse_default_regions_positive():
    for name, region in default_regions((0.05, 0.02, 0.02)).items():
        assert verify_region(region).min_slack > 0, name


def test_reduction_checks():
    checks = {c.name: c for c in cond2.range_reduction_checks()}
    htilde = checks["min htilde = 0.028 > 0"]
    assert htilde.passed and htilde.value == pytest.approx(0.028, abs=1e-3)
    assert checks["|G'(-1.25)| < 1.36"].passed
    assert checks["60/64 * 65/64 = 975/1024"].passed
    # h(1.25) is positive but well below 1/90
    h = checks["h(1.25) > 1/90"]
    assert 0 < h.value < 1 / 90 and not h.passed


def test_h_at_endpoint_by_quadrature():
    from scipy.integrate import quad

    g = lambda u: (2 - u) ** 3 * (4 + 6 * u + u * u) / 30
    G = quad(lambda u: math.exp(1.25 * u) * g(u), 0, 2)[0]
    dG = quad(lambda u: -u * math.exp(1.25 * u) * g(u), 0, 2)[0]
    assert 8 / 9 * G + 1.25 * dG == pytest.approx(0.0043440, abs=1e-6)


def test_spot_checks_pass():
    for spot in cond2.analytic_region_spotcheck(samples=2000):
        assert spot.passed, spot.name
    with pytest.raises(ValueError):
        cond2.analytic_region_spotcheck(samples=0)


def test_psi_monotone_small_t():
    assert cond2.psi_monotone_defect(n_a=201, n_t=31) >= 0


@given(st.floats(0, 13), st.floats(-math.pi / 2, math.pi / 2), st.floats(0.01, 2))
def test_psi_monotone_property(a, t, h):
    assert psi(a + h, t) >= psi(a, t) - 1e-14
