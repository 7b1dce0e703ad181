"""Geometric measurements on traced generating curves."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoBoundaryContact, NotAnExtremum, NotPeriodic, SingularVerticalTangent
from .odetrace import (
    BoundaryContact, CurveState, GeneratingCurve, _gauss_D, rates_for, state_at,
)
from .params import GaussConstant, LinearPrincipal


class PrincipalCurvaturePair(NamedTuple):
    kappa1: float
    kappa2: float
    gauss: float


class Crossing(NamedTuple):
    """Transverse crossing of two non-adjacent polyline segments."""

    x: float
    z: float
    s_a: float
    s_b: float


@dataclass(frozen=True)
class FeatureSet:
    minima: tuple
    maxima: tuple
    self_intersections: tuple
    contact_angles: tuple          # (left, right); None where no boundary contact
    period_x: float | None
    height: float | None
    is_graph_over_boundary: bool
    theta_range: tuple
    convexity: str


def principal_curvatures(spec, state: CurveState) -> PrincipalCurvaturePair:
    """``k1 = z*theta' + cos(theta)``, ``k2 = cos(theta)``, ``K = k1*k2 - 1``.

    ``theta'`` is taken from the closure, never from differences.
    """
    _, _, dth = rates_for(spec)(state.z, state.theta)
    k2 = math.cos(state.theta)
    k1 = state.z * dth + k2
    return PrincipalCurvaturePair(k1, k2, k1 * k2 - 1.0)


def z_times_zpp(spec, state: CurveState) -> float:
    """``z * z''`` from the closure; finite at vertical tangents."""
    th = state.theta
    c = math.cos(th)
    if isinstance(spec, GaussConstant):
        return _gauss_D(spec.K, math.sin(th), c)
    if isinstance(spec, LinearPrincipal):
        hs = math.sin(0.5 * th)
        return (spec.offset - 2.0 * (spec.m - 1.0) * hs * hs) * c
    raise TypeError(f"unsupported spec {spec!r}")


def weingarten_residual(spec, curve: GeneratingCurve) -> float:
    """Max deviation of the sampled curvatures from the defining relation.

    Samples sitting exactly on a vertical tangent of a constant-K curve,
    where k1 is infinite, are skipped.
    """
    worst = 0.0
    for st in curve.states():
        try:
            k1, k2, gauss = principal_curvatures(spec, st)
        except SingularVerticalTangent:
            continue
        if isinstance(spec, GaussConstant):
            r = abs(gauss - spec.K)
        else:
            r = abs(k1 - spec.m * k2 - spec.n)
        worst = max(worst, r)
    return worst


def first_integral_residual(curve: GeneratingCurve) -> float:
    """Max of ``|sin^2(theta) - K(z^2 - 1) - sin^2(theta0) z^2|`` (constant K).

    Along a solution ``u = sin^2(theta) - K(z^2-1)`` obeys ``u' = 2 u z'/z``,
    so ``u = u(0) z^2``; with a horizontal start this is ``z'^2 = K(z^2-1)``.
    """
    spec = curve.spec
    if not isinstance(spec, GaussConstant):
        raise TypeError("first integral applies to constant Gauss curvature")
    sn = np.sin(curve.theta)
    z = curve.z
    u0 = math.sin(curve.ic.theta0) ** 2
    return float(np.max(np.abs(sn * sn - spec.K * (z * z - 1.0) - u0 * z * z)))


def _origin_index(curve) -> int:
    i = int(np.searchsorted(curve.s, 0.0))
    if i >= len(curve) or curve.s[i] != 0.0:
        raise ValueError("curve has no sample at s = 0")
    return i


def _cumulative(s, f, f1, f2, method):
    """Running integral of sampled ``f`` from the first sample.

    ``"trapezoid"`` is the plain rule.  ``"hermite"`` adds the endpoint
    derivative corrections of the quintic Hermite interpolant on each panel,
    which makes the panel error O(h^7) instead of O(h^3).
    """
    h = np.diff(s)
    panel = 0.5 * h * (f[1:] + f[:-1])
    if method == "hermite":
        panel = panel + h * h / 10.0 * (f1[:-1] - f1[1:]) + h ** 3 / 120.0 * (f2[:-1] + f2[1:])
    elif method != "trapezoid":
        raise ValueError(f"unknown quadrature method {method!r}")
    return np.concatenate([[0.0], np.cumsum(panel)])


def _forward_half(curve, m, n):
    i0 = _origin_index(curve)
    s = curve.s[i0:]
    th = curve.theta[i0:]
    z = curve.z[i0:]
    sn, c = np.sin(th), np.cos(th)
    d1 = ((m - 1.0) * c + n) / z             # theta'
    d2 = -m * sn * d1 / z                    # theta''
    return s, th, z, sn, c, d1, d2


def integral_identity_residual(curve: GeneratingCurve, m: float, n: float,
                               method: str = "hermite") -> float:
    """Max over samples with ``s > 0`` of the gap in the integrated relation

        n + cos(theta) = ((2-m) * I(s) + n + cos(theta0)) / z,
        I(s) = int_0^s sin(theta) cos(theta) dt.

    ``I`` is accumulated panel by panel over the samples (see
    :func:`_cumulative`); the derivatives of the integrand come from the
    closure.  Near the boundary the division by z magnifies any drift of
    the trace, so the residual is roughly ``rel_tol / z_floor``.
    """
    s, th, z, sn, c, d1, d2 = _forward_half(curve, m, n)
    if len(s) < 2:
        return 0.0
    c2, s2 = np.cos(2 * th), np.sin(2 * th)
    f = sn * c
    f1 = c2 * d1
    f2 = -2.0 * s2 * d1 * d1 + c2 * d2
    integral = _cumulative(s, f, f1, f2, method)
    rhs = ((2.0 - m) * integral + n + math.cos(curve.ic.theta0)) / z
    return float(np.max(np.abs(n + c - rhs)[1:]))


def second_integral_residual(curve: GeneratingCurve, m: float, n: float,
                             method: str = "hermite") -> float:
    """Same as :func:`integral_identity_residual` for the companion relation

        sin(theta) = (s + J(s) + sin(theta0)) / z,
        J(s) = int_0^s (n cos(theta) + (m-2) cos^2(theta)) dt.
    """
    s, th, z, sn, c, d1, d2 = _forward_half(curve, m, n)
    if len(s) < 2:
        return 0.0
    a = n + 2.0 * (m - 2.0) * c
    f = n * c + (m - 2.0) * c * c
    f1 = -sn * d1 * a
    f2 = -(c * d1 * d1 + sn * d2) * a + 2.0 * (m - 2.0) * sn * sn * d1 * d1
    integral = _cumulative(s, f, f1, f2, method)
    rhs = (s + integral + math.sin(curve.ic.theta0)) / z
    return float(np.max(np.abs(sn - rhs)[1:]))


# -- extrema and symmetry ---------------------------------------------------

def _critical_points(curve: GeneratingCurve) -> list[CurveState]:
    if curve.symmetry_points:
        return list(curve.symmetry_points)
    tol = curve.options.event_tol
    out = []
    sn = np.sin(curve.theta)
    s = curve.s
    for i in range(len(s)):
        if sn[i] == 0.0 or (abs(sn[i]) <= tol and (i == 0 or abs(sn[i - 1]) > tol)):
            out.append(CurveState(*curve.samples[i].tolist()))
    for i in np.nonzero(sn[:-1] * sn[1:] < 0)[0]:
        lo, hi = float(s[i]), float(s[i + 1])
        g_lo = sn[i]
        st = state_at(curve, lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
            st = state_at(curve, mid)
            g = math.sin(st.theta)
            if abs(g) <= tol:
                break
            if (g > 0) == (g_lo > 0):
                lo, g_lo = mid, g
            else:
                hi = mid
        out.append(st)
    out.sort(key=lambda p: p.s)
    return out


def extrema(curve: GeneratingCurve) -> tuple[list[float], list[float]]:
    """Arc parameters of strict local minima and maxima of z(s).

    Critical points are the zeros of ``sin(theta)``; they are classified by
    the sign of ``z''`` (points with ``z'' = 0``, as on a horizontal line, are
    neither).
    """
    minima, maxima = [], []
    for p in _critical_points(curve):
        curv = z_times_zpp(curve.spec, p)
        if curv > 1e-12:
            minima.append(p.s)
        elif curv < -1e-12:
            maxima.append(p.s)
    return minima, maxima


def _hermite_xz(curve: GeneratingCurve, s: np.ndarray):
    """Vectorized cubic Hermite interpolation of x and z (slopes cos, sin)."""
    S = curve.s
    i = np.clip(np.searchsorted(S, s, side="right") - 1, 0, len(S) - 2)
    h = S[i + 1] - S[i]
    u = (s - S[i]) / h
    h00 = (1 + 2 * u) * (1 - u) ** 2
    h10 = u * (1 - u) ** 2
    h01 = u * u * (3 - 2 * u)
    h11 = u * u * (u - 1)
    t0, t1 = curve.theta[i], curve.theta[i + 1]
    x = h00 * curve.x[i] + h10 * h * np.cos(t0) + h01 * curve.x[i + 1] + h11 * h * np.cos(t1)
    z = h00 * curve.z[i] + h10 * h * np.sin(t0) + h01 * curve.z[i + 1] + h11 * h * np.sin(t1)
    return x, z


def symmetry_deviation(curve: GeneratingCurve, s0: float) -> float:
    """Largest distance between ``alpha(s0 + d)`` and the mirror image of
    ``alpha(s0 - d)`` in the vertical line ``x = x(s0)``.
    """
    p = state_at(curve, s0)
    if abs(math.sin(p.theta)) > curve.options.event_tol:
        raise NotAnExtremum(f"sin(theta) = {math.sin(p.theta):.3e} at s = {s0}")
    S = curve.s
    width = min(s0 - S[0], S[-1] - s0)
    d = np.abs(S - s0)
    pick = (d > 0) & (d <= width)
    if not np.any(pick):
        return 0.0
    partner = 2.0 * s0 - S[pick]
    xp, zp = _hermite_xz(curve, partner)
    dev = np.hypot(curve.x[pick] - (2.0 * p.x - xp), curve.z[pick] - zp)
    return float(dev.max())


def reflect_extend(curve, s0):
    from .odetrace import reflect_extend as _reflect
    return _reflect(curve, s0)


# -- self intersections -----------------------------------------------------

def self_intersections(curve: GeneratingCurve) -> list[Crossing]:
    """Transverse crossings between non-adjacent segments of the polyline.

    Candidate pairs come from a uniform grid hash over segment bounding
    boxes; the crossing point is the intersection of the two segments.
    """
    P = curve.samples[:, 1:3]
    S = curve.s
    nseg = len(P) - 1
    if nseg < 3:
        return []
    A, B = P[:-1], P[1:]
    lo, hi = np.minimum(A, B), np.maximum(A, B)
    seg_len = np.hypot(*(B - A).T)
    cell = max(2.0 * float(seg_len.mean()), 1e-12)
    c0 = np.floor(lo / cell).astype(np.int64)
    c1 = np.floor(hi / cell).astype(np.int64)
    grid = defaultdict(list)
    for i, (ax, az, bx, bz) in enumerate(np.hstack([c0, c1]).tolist()):
        for cx in range(ax, bx + 1):
            for cz in range(az, bz + 1):
                grid[(cx, cz)].append(i)
    pairs = set()
    for members in grid.values():
        if len(members) < 2:
            continue
        for a in range(len(members)):
            i = members[a]
            for j in members[a + 1:]:
                if j - i >= 2:
                    pairs.add((i, j))
                elif i - j >= 2:
                    pairs.add((j, i))
    if not pairs:
        return []
    I, J = np.array(sorted(pairs)).T
    p, r = A[I], B[I] - A[I]
    q, w = A[J], B[J] - A[J]

    def cross(u, v):
        return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]

    o1 = cross(r, q - p)
    o2 = cross(r, q + w - p)
    o3 = cross(w, p - q)
    o4 = cross(w, p + r - q)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    if not np.any(hit):
        return []
    I, J, p, r, q, w = I[hit], J[hit], p[hit], r[hit], q[hit], w[hit]
    denom = cross(r, w)
    t = cross(q - p, w) / denom
    u = cross(q - p, r) / denom
    pt = p + t[:, None] * r
    sa = S[I] + t * (S[I + 1] - S[I])
    sb = S[J] + u * (S[J + 1] - S[J])
    out = [Crossing(float(a), float(b), float(c), float(d))
           for a, b, c, d in zip(pt[:, 0], pt[:, 1], sa, sb)]
    out.sort(key=lambda c: (c.s_a, c.s_b))
    return out


# -- boundary behaviour -----------------------------------------------------

def _tail(curve, end, count):
    rows = curve.samples[-count:][::-1] if end == "right" else curve.samples[:count]
    return rows


def contact_angle(curve: GeneratingCurve, end: str) -> float:
    """Angle in ``[0, pi/2]`` between the curve and the ideal boundary.

    Near the boundary ``theta`` approaches its limit like ``C z^p``.  With the
    samples at ``z_floor * 2**k`` laid down by the tracer, three consecutive
    ones in geometric progression determine the limit by Aitken's delta^2
    extrapolation; otherwise the final angle is used.
    """
    reason = curve.end_reason(end)
    if not isinstance(reason, BoundaryContact):
        raise NoBoundaryContact(f"{end} end terminated with {type(reason).__name__}")
    limit = _extrapolated_theta(_tail(curve, end, 8), reason.theta_final)
    return math.atan2(abs(math.sin(limit)), abs(math.cos(limit)))


def _extrapolated_theta(rows, fallback):
    if len(rows) < 3:
        return fallback
    z = rows[:3, 2]
    th = rows[:3, 3]
    r1, r2 = z[1] / z[0], z[2] / z[1]
    if not (r1 > 1.2 and abs(r2 / r1 - 1.0) < 1e-3):
        return fallback
    d1, d2 = th[1] - th[0], th[2] - th[1]
    if abs(d1) < 1e-13:
        return float(th[0])
    rho = d2 / d1
    if not (math.isfinite(rho) and rho > 1.0 + 1e-9):
        return fallback
    return float(th[0] - d1 / (rho - 1.0))


def measured_height(curve: GeneratingCurve) -> float:
    """Hyperbolic distance between the horospheres bounding the curve."""
    z = curve.z
    return float(math.log(z.max() / z.min()))


# -- periodicity ------------------------------------------------------------

def successive_periods(curve: GeneratingCurve, z_rtol: float = 1e-6) -> list[float]:
    """Translation offsets between consecutive congruent critical points.

    Critical points with ``theta = k*pi`` are grouped by the parity of ``k``
    (same direction of travel); within the group containing the point
    closest to ``s = 0`` consecutive entries must have equal height and
    ``k`` differing by 2, i.e. one full turn of the tangent.
    """
    pts = _critical_points(curve)
    if not pts:
        raise NotPeriodic("no critical points")
    anchor = min(pts, key=lambda p: abs(p.s))
    k_anchor = round(anchor.theta / math.pi)
    group = [p for p in pts if (round(p.theta / math.pi) - k_anchor) % 2 == 0]
    group.sort(key=lambda p: p.s)
    periods = []
    for a, b in zip(group, group[1:]):
        ka, kb = round(a.theta / math.pi), round(b.theta / math.pi)
        if abs(kb - ka) != 2 or abs(a.z - b.z) > z_rtol * max(a.z, b.z):
            raise NotPeriodic(f"critical points at s={a.s:.6g}, {b.s:.6g} are not congruent")
        periods.append(b.x - a.x)
    if len(periods) < 2:
        raise NotPeriodic("fewer than two full turns of the tangent")
    return periods


def period(curve: GeneratingCurve, rtol: float = 1e-6) -> float:
    """Length of the x-translation carrying the curve onto itself."""
    periods = successive_periods(curve)
    ref = abs(periods[0])
    for p in periods[1:]:
        if abs(abs(p) - ref) > rtol * max(1.0, ref):
            raise NotPeriodic(f"successive periods disagree: {periods[0]} vs {p}")
    return ref


# -- summary ----------------------------------------------------------------

def convexity(curve: GeneratingCurve, tol: float = 1e-12) -> str:
    vals = np.array([z_times_zpp(curve.spec, st) for st in curve.states()])
    pos = bool(np.any(vals > tol))
    neg = bool(np.any(vals < -tol))
    if pos and neg:
        return "Mixed"
    if pos:
        return "Convex"
    if neg:
        return "Concave"
    return "Flat"


def is_graph(curve: GeneratingCurve) -> bool:
    dx = np.diff(curve.x)
    return bool(len(dx) > 0 and (np.all(dx > 0) or np.all(dx < 0)))


def features(curve: GeneratingCurve) -> FeatureSet:
    minima, maxima = extrema(curve)
    angles = []
    for end in ("left", "right"):
        try:
            angles.append(contact_angle(curve, end))
        except NoBoundaryContact:
            angles.append(None)
    try:
        per = period(curve)
    except NotPeriodic:
        per = None
    return FeatureSet(
        minima=tuple(minima),
        maxima=tuple(maxima),
        self_intersections=tuple(self_intersections(curve)),
        contact_angles=tuple(angles),
        period_x=per,
        height=measured_height(curve),
        is_graph_over_boundary=is_graph(curve),
        theta_range=(float(curve.theta.min()), float(curve.theta.max())),
        convexity=convexity(curve),
    )
