import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergmlimit.errors import DomainError, RegionError
from ergmlimit.functionals import (
    cut_distance_upper,
    edge_density,
    rate_function,
    rate_function_scalar,
    triangle_density,
)
from ergmlimit.graphs import bipartite_test_graphon
from ergmlimit.variational import (
    BipodalParams,
    bipodal_edge,
    bipodal_rate,
    bipodal_triangle,
    feasible_on_grid,
    region_bounds,
    rs_lower_bound_check,
    s_curve,
    s_half_closed,
    s_numeric,
    s_value,
)
from ergmlimit.variational import _grad_edge, _grad_rate, _grad_triangle

HALF_LOG2 = math.log(2) / 2


def I(u):
    return rate_function_scalar(u)


# --- closed form on e = 1/2 ---------------------------------------------------

def test_closed_form_endpoints():
    top = s_half_closed(0.125)
    assert abs(top.s - HALF_LOG2) <= 1e-12
    assert top.maximizer.as_array().tolist() == [0.5, 0.5, 0.5, 0.5]
    bottom = s_half_closed(0.0)
    assert bottom.s == pytest.approx(0.0, abs=1e-15)
    assert bottom.maximizer.p12 == pytest.approx(1.0)


def test_closed_form_mid_value():
    pt = s_half_closed(0.0212)
    eps = (0.125 - 0.0212) ** (1 / 3)
    assert eps == pytest.approx(0.4699, abs=1e-4)
    assert pt.s == pytest.approx(-I(0.5 + eps), abs=1e-15)
    u = 0.5 + eps
    assert pt.s == pytest.approx(-0.5 * (u * math.log(u) + (1 - u) * math.log(1 - u)), abs=1e-15)
    assert pt.s == pytest.approx(0.06743, abs=1e-5)
    # same number through the graphon functionals
    assert -rate_function(pt.maximizer.graphon()) == pytest.approx(pt.s, abs=1e-14)
    assert triangle_density(pt.maximizer.graphon()) == pytest.approx(0.0212, abs=1e-14)


@given(st.floats(0.0, 0.125), st.floats(0.0, 0.125))
def test_closed_form_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    assert s_half_closed(lo).s <= s_half_closed(hi).s


@pytest.mark.parametrize("t", [-1e-3, 0.13])
def test_closed_form_domain(t):
    with pytest.raises(DomainError):
        s_half_closed(t)


# --- bipodal algebra ----------------------------------------------------------

@given(st.floats(0.01, 0.99), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_bipodal_formulas_match_graphon(c, a, b, g):
    x = (c, a, b, g)
    h = BipodalParams(*x).graphon()
    assert bipodal_edge(x) == pytest.approx(edge_density(h), abs=1e-14)
    assert bipodal_triangle(x) == pytest.approx(triangle_density(h), abs=1e-14)
    assert bipodal_rate(x) == pytest.approx(rate_function(h), abs=1e-14)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_analytic_gradients(c, a, b, g):
    x = np.array([c, a, b, g])
    h = 1e-6
    for f, grad in ((bipodal_edge, _grad_edge), (bipodal_triangle, _grad_triangle),
                    (bipodal_rate, _grad_rate)):
        fd = np.array([(f(x + h * np.eye(4)[i]) - f(x - h * np.eye(4)[i])) / (2 * h) for i in range(4)])
        assert np.allclose(grad(x), fd, atol=1e-7)


def test_grid_points_are_feasible():
    pts = feasible_on_grid(0.3, 0.01)
    assert len(pts) > 0
    for x in pts[:: max(1, len(pts) // 50)]:
        assert bipodal_edge(x) == pytest.approx(0.3, abs=1e-12)
        assert bipodal_triangle(x) == pytest.approx(0.01, abs=1e-12)


def test_canonical_orientation():
    p = BipodalParams(0.7, 0.2, 0.4, 0.9).canonical()
    assert p.as_array().tolist() == [pytest.approx(0.3), 0.9, 0.4, 0.2]


# --- numeric search -----------------------------------------------------------

@pytest.mark.parametrize("e", [0.1, 0.2, 0.3, 0.4, 0.5])
def test_zero_triangle_entropy(e):
    pt = s_numeric(e, 0.0)
    assert abs(pt.s - (-I(2 * e) / 2)) <= 1e-6
    assert cut_distance_upper(pt.maximizer.graphon(), bipartite_test_graphon(e)) < 1e-6


@pytest.mark.parametrize("t", [0.0, 0.02, 0.05, 0.1, 0.12])
def test_numeric_matches_closed_form(t):
    assert s_numeric(0.5, t).s == pytest.approx(s_half_closed(t).s, abs=1e-6)


@pytest.mark.parametrize("e", [0.1, 0.2, 0.3, 0.4, 0.5])
def test_erdos_renyi_curve(e):
    pt = s_numeric(e, e**3)
    assert pt.s == -I(e)
    assert pt.maximizer.as_array().tolist() == [0.5, e, e, e]


@pytest.mark.parametrize("e, t", [(0.3, 0.005), (0.3, 0.02), (0.4, 0.03), (0.2, 0.004)])
def test_numeric_point_properties(e, t):
    pt = s_numeric(e, t)
    x = pt.maximizer.as_array()
    assert abs(bipodal_edge(x) - e) <= 1e-8
    assert abs(bipodal_triangle(x) - t) <= 1e-8
    assert pt.s <= -I(e) + 1e-12
    assert pt.conjectural
    # any feasible grid point is no better
    assert pt.s >= float(np.max(-bipodal_rate(feasible_on_grid(e, t)))) - 1e-12


def test_numeric_curve_monotone_and_warm_start_consistent():
    ts = np.linspace(0.0, 0.027, 10)
    pts = s_curve(0.3, ts)
    s = [p.s for p in pts]
    assert all(b >= a - 1e-10 for a, b in zip(s, s[1:]))
    for p in pts[::3]:
        assert p.s == pytest.approx(s_numeric(0.3, p.t).s, abs=1e-9)


def test_s_value_dispatch():
    assert s_value(0.5, 0.05).s == s_half_closed(0.05).s
    assert s_value(0.3, 0.01).s == s_numeric(0.3, 0.01).s


@pytest.mark.parametrize(
    "e, t, err",
    [
        (0.3, -1e-6, RegionError),
        (0.3, 0.3**1.5 + 1e-6, RegionError),
        (0.3, 0.1, DomainError),  # above e^3, inside the region
        (0.6, 0.1, DomainError),
        (0.0, 0.0, DomainError),
    ],
)
def test_numeric_errors(e, t, err):
    with pytest.raises(err):
        s_numeric(e, t)


def test_region_tolerance_edge():
    s_numeric(0.3, -5e-10)  # inside the 1e-9 slack


# --- feasible region ----------------------------------------------------------

def test_region_bounds_examples():
    assert region_bounds(0.25) == (0.0, 0.125)
    t_min, t_max = region_bounds(0.5)
    assert t_min == 0.0 and t_max == pytest.approx(2**-1.5)
    assert region_bounds(1.0) == (1.0, 1.0)
    with pytest.raises(DomainError):
        region_bounds(1.5)


@pytest.mark.parametrize("k", [3, 4])
def test_turan_anchor(k):
    e = (k - 1) / k
    assert region_bounds(e)[0] == pytest.approx((k - 1) * (k - 2) / k**2, abs=1e-9)


def test_region_lower_bound_is_increasing_above_half():
    vals = [region_bounds(e)[0] for e in (0.55, 0.6, 2 / 3, 0.7)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# --- two-thirds power bound ---------------------------------------------------

def test_rs_bound_closed_form():
    grid = np.linspace(0, 0.125, 101)[:-1]
    assert rs_lower_bound_check(0.5, grid) > 0
    # ratio near the endpoint stays bounded away from 0
    near = 0.125 - np.logspace(-12, -4, 20)
    assert rs_lower_bound_check(0.5, near) > 0.1


def test_rs_bound_numeric():
    grid = np.linspace(0, 0.027, 8, endpoint=False)
    assert rs_lower_bound_check(0.3, grid) > 0


def test_rs_bound_rejects_bad_grid():
    with pytest.raises(RegionError):
        rs_lower_bound_check(0.5, [0.1, 0.125])
    with pytest.raises(RegionError):
        rs_lower_bound_check(0.5, [])
