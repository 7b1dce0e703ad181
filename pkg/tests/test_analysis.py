import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from parabolic_weingarten import analysis as an
from parabolic_weingarten.errors import NoBoundaryContact, NotAnExtremum, NotPeriodic
from parabolic_weingarten.odetrace import (
    CurveState, GeneratingCurve, MaxArcLength, TraceOptions, trace,
)
from parabolic_weingarten.params import GaussConstant, InitialConditions, LinearPrincipal


def test_curvatures_horosphere():
    p = an.principal_curvatures(LinearPrincipal(0.5, 0.5), CurveState(0, 0, 1, 0))
    assert p == (1.0, 1.0, 0.0)


@pytest.mark.parametrize("s", [0.0, 0.4, -1.1])
def test_curvatures_geodesic_half_circle(s):
    p = an.principal_curvatures(GaussConstant(-1.0), CurveState(s, math.sin(s), math.cos(s), -s))
    assert p.kappa1 == pytest.approx(0.0, abs=1e-15)
    assert p.kappa2 == pytest.approx(math.cos(s))
    assert p.gauss == pytest.approx(-1.0)


def test_curvatures_linear_origin():
    p = an.principal_curvatures(LinearPrincipal(3.0, 1.0), CurveState(0, 0, 1, 0))
    assert (p.kappa1, p.kappa2) == (4.0, 1.0)
    assert p.gauss == p.kappa1 * p.kappa2 - 1


def test_residual_exact_horosphere():
    c = GeneratingCurve(np.array([[-1, -1, 1, 0], [0, 0, 1, 0], [1, 1, 1, 0]], float),
                        LinearPrincipal(0.5, 0.5), InitialConditions(), MaxArcLength(), MaxArcLength())
    assert an.weingarten_residual(c.spec, c) == 0.0


@pytest.mark.parametrize("name", ["K1", "K0.5", "K-0.5", "K-1", "K-2"])
def test_gauss_residual(curves, name):
    c = curves(name)
    assert an.weingarten_residual(c.spec, c) <= 1e-8


def test_linear_residual(curves):
    c = curves("LW-2,1")
    assert an.weingarten_residual(c.spec, c) <= 1e-8


def test_extrema_counts(curves):
    assert an.extrema(curves("K1")) == ([0.0], [])
    assert an.extrema(curves("K-0.5")) == ([], [0.0])
    assert an.extrema(curves("K0")) == ([], [])


def test_extrema_from_samples_only(curves):
    # without recorded critical points the sign changes of sin(theta) are refined
    c = replace(curves("LW1,2"), symmetry_points=())
    mins, maxs = an.extrema(c)
    ref_mins, ref_maxs = an.extrema(curves("LW1,2"))
    assert len(mins) == len(ref_mins) and len(maxs) == len(ref_maxs)
    assert np.allclose(mins, ref_mins, atol=1e-8)
    assert np.allclose(maxs, ref_maxs, atol=1e-8)


def test_no_crossings_on_graphs(curves):
    assert an.self_intersections(curves("K1")) == []
    assert an.self_intersections(curves("LW2,0")) == []


def test_crossings_periodic(curves):
    xs = an.self_intersections(curves("LW1,2"))
    assert len(xs) >= 1
    assert [c.s_a for c in xs] == sorted(c.s_a for c in xs)
    for c in xs:
        assert c.s_a < c.s_b


def _polyline(points):
    pts = np.asarray(points, float)
    seg = np.hypot(*np.diff(pts, axis=0).T)
    s = np.concatenate([[0], np.cumsum(seg)])
    th = np.zeros(len(pts))
    return GeneratingCurve(np.column_stack([s, pts, th]), LinearPrincipal(2.0, 1.0),
                           InitialConditions(), MaxArcLength(), MaxArcLength())


def test_crossing_hand_oracle():
    # a bow tie: segment 0 from (0,1) to (2,3) crosses segment 2 from (2,1) to (0,3) at (1,2)
    c = _polyline([(0, 1), (2, 3), (2, 1), (0, 3)])
    xs = an.self_intersections(c)
    assert len(xs) == 1
    assert (xs[0].x, xs[0].z) == pytest.approx((1.0, 2.0))
    assert xs[0].s_a == pytest.approx(math.sqrt(2))
    assert xs[0].s_b == pytest.approx(2 * math.sqrt(8) + 2 + math.sqrt(2) - math.sqrt(8))


def _reversed(c):
    rows = c.samples[::-1].copy()
    rows[:, 0] = -rows[:, 0]
    rows[:, 3] = rows[:, 3] + math.pi
    return replace(c, samples=rows, symmetry_points=())


def _point_set(xs):
    return sorted((round(c.x, 9), round(c.z, 9)) for c in xs)


@pytest.mark.parametrize("name", ["LW1,2", "LW3,1", "LW-2,3"])
def test_crossings_reversal_symmetric(curves, name):
    c = curves(name)
    a = _point_set(an.self_intersections(c))
    b = _point_set(an.self_intersections(_reversed(c)))
    assert a == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 20)), min_size=4, max_size=30))
def test_crossings_reversal_symmetric_random(points):
    pts = [(x + 0.001 * i, z + 0.0007 * i * i) for i, (x, z) in enumerate(points)]
    if any(np.hypot(a[0] - b[0], a[1] - b[1]) == 0 for a, b in zip(pts, pts[1:])):
        return
    c = _polyline(pts)
    a = _point_set(an.self_intersections(c))
    b = _point_set(an.self_intersections(_reversed(c)))
    assert a == b


def test_crossing_brute_force_agrees(curves):
    c = curves("LW-2,3")
    xs = an.self_intersections(c)
    P = c.samples[:, 1:3]
    hits = 0
    A, B = P[:-1], P[1:]
    for i in range(len(A)):
        p, r = A[i], B[i] - A[i]
        q, w = A[i + 2:], B[i + 2:] - A[i + 2:]
        d = r[0] * w[:, 1] - r[1] * w[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = ((q[:, 0] - p[0]) * w[:, 1] - (q[:, 1] - p[1]) * w[:, 0]) / d
            u = ((q[:, 0] - p[0]) * r[1] - (q[:, 1] - p[1]) * r[0]) / d
        hits += int(np.sum((t > 0) & (t < 1) & (u > 0) & (u < 1)))
    assert hits == len(xs)


def test_contact_angles(curves):
    assert an.contact_angle(curves("LW-2,1"), "left") == pytest.approx(math.acos(1 / 3), abs=1e-3)
    assert an.contact_angle(curves("K-0.25"), "right") == pytest.approx(math.pi / 6, abs=1e-4)
    with pytest.raises(NoBoundaryContact):
        an.contact_angle(curves("K0"), "left")


def test_contact_angle_converges_under_halving():
    a = an.contact_angle(trace(LinearPrincipal(-2.0, 1.0)), "right")
    b = an.contact_angle(trace(LinearPrincipal(-2.0, 1.0), opts=TraceOptions(z_floor=5e-7)), "right")
    assert abs(a - b) < 1e-4


def test_contact_angle_fallback_without_levels():
    c = trace(GaussConstant(-0.25), opts=TraceOptions(boundary_levels=0))
    assert an.contact_angle(c, "left") == pytest.approx(math.pi / 6, abs=1e-4)


def test_period_matches_bessel_oracle(curves):
    # for m = 1 the quantity log z + cos(theta)/n is conserved, which gives
    # |period| = 2 pi exp(1/n) I1(1/n) / n
    n = 2.0
    ref = 2 * math.pi * math.exp(1 / n) * special.iv(1, 1 / n) / n
    assert an.period(curves("LW1,2")) == pytest.approx(ref, abs=1e-8)


def test_period_successive_and_half(curves):
    c = curves("LW1,2")
    per = an.successive_periods(c)
    assert len(per) >= 2
    assert abs(abs(per[0]) - abs(per[1])) <= 1e-6
    s2 = min((p for p in c.symmetry_points if p.s > 0 and abs(p.theta - math.pi) < 1e-9),
             key=lambda p: p.s)
    assert 2 * abs(s2.x) == pytest.approx(abs(per[0]), abs=1e-6)


def test_not_periodic(curves):
    with pytest.raises(NotPeriodic):
        an.period(curves("K1"))
    with pytest.raises(NotPeriodic):
        an.period(curves("LW3,1"))


def test_heights(curves):
    assert an.measured_height(curves("K1")) == pytest.approx(0.5 * math.log(2), abs=1e-6)
    assert an.measured_height(curves("K0")) == 0.0
    assert an.measured_height(curves("K-2")) == pytest.approx(0.5 * math.log(2), abs=1e-6)


def test_symmetry(curves):
    assert an.symmetry_deviation(curves("K1"), 0.0) <= 1e-8
    c = curves("LW1,2")
    s2 = min(p.s for p in c.symmetry_points if p.s > 0 and abs(p.theta - math.pi) < 1e-9)
    assert an.symmetry_deviation(c, s2) <= 1e-6
    with pytest.raises(NotAnExtremum):
        an.symmetry_deviation(curves("K1"), 0.5)


def test_symmetry_detects_asymmetry(curves):
    c = curves("K1")
    rows = c.samples.copy()
    rows[c.s > 0.3, 2] += 1e-4
    assert an.symmetry_deviation(replace(c, samples=rows), 0.0) >= 0.9e-4


def test_integral_identity_horosphere(curves):
    assert an.integral_identity_residual(curves("LW.5,.5"), 0.5, 0.5) == 0.0


def test_integral_identity_default_trace(curves):
    assert an.integral_identity_residual(curves("LW3,1"), 3.0, 1.0) <= 1e-6
    assert an.second_integral_residual(curves("LW3,1"), 3.0, 1.0) <= 1e-6


def test_integral_identity_tight_trace():
    c = trace(LinearPrincipal(-2.0, 1.0), opts=TraceOptions(rel_tol=1e-13, abs_tol=1e-15))
    assert an.integral_identity_residual(c, -2.0, 1.0) <= 1e-6
    assert an.second_integral_residual(c, -2.0, 1.0) <= 1e-6


def test_plain_trapezoid_is_coarser(curves):
    c = curves("LW3,1")
    assert an.integral_identity_residual(c, 3.0, 1.0, "trapezoid") > \
        an.integral_identity_residual(c, 3.0, 1.0, "hermite")


def test_first_integral_residual_general_angle(curves):
    # u = sin^2 - K(z^2 - 1) scales like z^2 for any start
    assert an.first_integral_residual(curves("K-0.25pi4")) <= 1e-8


def test_features(curves):
    fs = an.features(curves("K-0.5"))
    assert fs.is_graph_over_boundary and not fs.self_intersections
    assert fs.contact_angles == pytest.approx((math.pi / 4, math.pi / 4), abs=1e-6)
    assert fs.period_x is None
    assert fs.convexity == "Concave"
    lo, hi = fs.theta_range
    assert lo == pytest.approx(-math.pi / 4, abs=1e-6) and hi == pytest.approx(math.pi / 4, abs=1e-6)


@pytest.mark.parametrize("name", ["K1", "K-0.5", "K-2", "LW2,0", "LW-2,1", "LW3,1", "LW1,2", "LW-2,3"])
def test_graph_iff_monotone_and_embedded(curves, name):
    fs = an.features(curves(name))
    if fs.is_graph_over_boundary:
        assert not fs.self_intersections
