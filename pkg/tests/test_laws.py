import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from stitx.extremes import threshold_v
from stitx.laws import (
    AVOIDANCE_ENVELOPE_COEFF,
    agg_bound,
    cell_intensity,
    gumbel_limit,
    poisson_pmf,
    poisson_pmf_vector,
    tv_distance,
    two_disk_avoidance,
    two_disk_avoidance_envelope,
    typical_inradius_survival,
)

# recomputed from the closed forms before the build (see tests for the
# separating mass); the avoidance probability at r=0.5, d=2.0
AVOID_HALF_TWO = 0.15460845581830124


# ------------------------------------------------------------- survival law

def test_survival_examples():
    assert typical_inradius_survival(1.0, 0.0) == 1.0
    v = threshold_v(100.0, 2.0, 1.0)
    assert typical_inradius_survival(1.0, v) == pytest.approx(0.02, rel=1e-12)
    assert typical_inradius_survival(2.0, 0.5) == pytest.approx(math.exp(-2.0), rel=1e-12)
    with pytest.raises(ValueError):
        typical_inradius_survival(0.0, 1.0)
    with pytest.raises(ValueError):
        typical_inradius_survival(1.0, -1.0)


@given(rho=st.floats(0.5, 1e5), tau_frac=st.floats(1e-4, 0.999), t=st.floats(0.1, 10))
def test_calibration_identity(rho, tau_frac, t):
    """rho * survival(threshold) returns tau for all tau < rho."""
    tau = rho * tau_frac
    v = threshold_v(rho, tau, t)
    assert rho * typical_inradius_survival(t, v) == pytest.approx(tau, rel=1e-9)


def test_cell_intensity():
    assert cell_intensity(1.0) == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert cell_intensity(2.0) == pytest.approx(4.0 / math.pi, rel=1e-12)
    # survival-calibrated mean count over the observation window equals tau
    t, rho, tau = 2.0, 50.0, 3.0
    v = threshold_v(rho, tau, t)
    mean = cell_intensity(t) * (math.pi * rho / t**2) * typical_inradius_survival(t, v)
    assert mean == pytest.approx(tau, rel=1e-12)


# ------------------------------------------------------------------ poisson

def test_poisson_pmf_values():
    assert poisson_pmf(1.0, 0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert poisson_pmf(2.0, 2) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-12)
    for tau in (0.5, 5.0, 40.0):
        for r in (0, 3, 17, 200, 400):
            assert poisson_pmf(tau, r) == pytest.approx(
                stats.poisson(tau).pmf(r), rel=1e-10, abs=1e-300
            )


def test_poisson_vector_truncation():
    vec = poisson_pmf_vector(2.0)
    assert vec.sum() == pytest.approx(1.0, abs=1e-12)
    assert 1.0 - vec.sum() < 1e-12
    assert np.all(vec >= 0)


def test_gumbel_limit():
    assert gumbel_limit(0.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert gumbel_limit(50.0) == pytest.approx(1.0, abs=1e-12)
    assert gumbel_limit(-math.log(2.0)) == pytest.approx(math.exp(-2.0), rel=1e-12)
    for u in (-1.0, 0.3, 2.0):
        # consistency with the Poisson zero-class at mean exp(-u)
        assert gumbel_limit(u) == pytest.approx(poisson_pmf(math.exp(-u), 0), rel=1e-12)


# ------------------------------------------------------------ two-disk law

def test_two_disk_avoidance_reference_value():
    assert two_disk_avoidance(0.5, 2.0) == pytest.approx(AVOID_HALF_TWO, rel=1e-9)


def test_two_disk_avoidance_tangent():
    for r in (0.25, 0.5, 1.3):
        expected = math.exp(-(2.0 * r + 4.0 * r / math.pi))
        assert two_disk_avoidance(r, 2.0 * r) == pytest.approx(expected, rel=1e-12)


def test_two_disk_avoidance_errors():
    with pytest.raises(ValueError):
        two_disk_avoidance(0.5, 0.5)
    with pytest.raises(ValueError):
        two_disk_avoidance(-0.5, 2.0)


def test_two_disk_avoidance_envelope():
    assert AVOIDANCE_ENVELOPE_COEFF == pytest.approx(2.0 / (2.0 - 4.0 / math.pi), rel=1e-12)
    for r in (0.2, 0.5, 1.0, 2.0):
        env = two_disk_avoidance_envelope(r)
        for d in np.linspace(2 * r, 12 * r, 40):
            val = two_disk_avoidance(r, float(d))
            assert 0.0 < val <= env + 1e-12
            assert val <= math.exp(-2.0 * r) + 1e-12  # harder than avoiding one disk


def test_two_disk_avoidance_continuous_at_branch_point():
    """The ratio form and its limit agree across d = pi r."""
    r = 0.5
    d0 = math.pi * r
    base = two_disk_avoidance(r, d0)
    for eps in (1e-3, 1e-5, 1e-7, 1e-9):
        hi = two_disk_avoidance(r, d0 + eps)
        lo = two_disk_avoidance(r, d0 - eps)
        # |d/dd avoidance| < 0.1 near the branch point
        assert abs(hi - lo) < 0.2 * eps + 1e-12
        assert abs(hi - base) < 0.1 * eps + 1e-12
    grid = np.linspace(d0 - 1e-6, d0 + 1e-6, 41)
    vals = [two_disk_avoidance(r, float(d)) for d in grid]
    jumps = np.abs(np.diff(vals))
    assert jumps.max() < 1e-8


def test_two_disk_avoidance_decreasing_in_r():
    for d in (2.0, 3.0, 5.0):
        rs = np.linspace(0.05, d / 2, 30)
        vals = [two_disk_avoidance(float(r), d) for r in rs]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


# --------------------------------------------------------------- tv distance

def test_tv_examples():
    assert tv_distance([0.2, 0.8], [0.2, 0.8]) == 0.0
    assert tv_distance([1.0], [0.0, 1.0]) == pytest.approx(2.0)  # point masses
    p = poisson_pmf_vector(1.0)
    q = poisson_pmf_vector(1.1)
    direct = tv_distance(p, q)
    n = max(len(p), len(q))
    p2 = np.pad(p, (0, n - len(p)))
    q2 = np.pad(q, (0, n - len(q)))
    sup_form = 2.0 * max(np.maximum(p2 - q2, 0).sum(), np.maximum(q2 - p2, 0).sum())
    assert direct == pytest.approx(sup_form, abs=1e-10)


def test_tv_validation():
    with pytest.raises(ValueError):
        tv_distance([-0.1, 1.1], [1.0])
    with pytest.raises(ValueError):
        tv_distance([0.9, 0.9], [1.0])


@given(
    a=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12),
    b=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12),
    c=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12),
)
def test_tv_is_a_metric(a, b, c):
    def norm(vec):
        arr = np.asarray(vec) + 1e-9
        return arr / arr.sum()

    p, q, r = norm(a), norm(b), norm(c)
    assert tv_distance(p, q) == pytest.approx(tv_distance(q, p), abs=1e-12)
    assert tv_distance(p, p) == 0.0
    assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12


# ----------------------------------------------------------------- agg bound

def test_agg_bound_values():
    assert agg_bound(0.0, 0.0, 0.0, 1.0) == 0.0
    assert agg_bound(0.1, 0.05, 0.01, 2.0) == pytest.approx(0.14949869738773142, rel=1e-12)


def test_agg_bound_asymptotics():
    lam = 1e6
    val = agg_bound(0.1, 0.05, 0.01, lam)
    # dominated by the b3 term, with an O(1/lam) remainder
    assert val == pytest.approx(2.0 * 0.01 * 1.4 / math.sqrt(lam), rel=2e-2)
    with pytest.raises(ValueError):
        agg_bound(-0.1, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        agg_bound(0.1, 0.0, 0.0, 0.0)
