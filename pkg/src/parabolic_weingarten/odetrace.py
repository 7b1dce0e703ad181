"""Arc-length tracing of generating curves.

The generating curve ``(x(s), z(s))`` is parametrized by Euclidean arc
length with tangent angle ``theta``::

    x' = cos(theta),  z' = sin(theta),  theta' = closure(z, theta)

where the closure comes from the curvature relation.  Each trace integrates
both directions from ``s = 0`` with an adaptive Dormand-Prince pair and stops
on the first terminal event per direction.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Union

import numpy as np

from . import _rk
from .errors import (
    NonpositiveHeight, NotAnExtremum, SingularVerticalTangent, UnsupportedSpec,
)
from .params import GaussConstant, InitialConditions, LinearPrincipal

# |cos(theta)| below which a constant-K trace switches to theta as the
# independent variable
VERTICAL_SWITCH = 0.05
# smallest retained spacing between consecutive samples
MIN_SAMPLE_GAP = 1e-7
_MAX_STEPS = 5_000_000


class CurveState(NamedTuple):
    s: float
    x: float
    z: float
    theta: float


@dataclass(frozen=True)
class BoundaryContact:
    z_final: float
    theta_final: float


@dataclass(frozen=True)
class VerticalTangent:
    s: float


@dataclass(frozen=True)
class SymmetryPoint:
    s: float
    theta: float


@dataclass(frozen=True)
class MaxArcLength:
    pass


@dataclass(frozen=True)
class StepUnderflow:
    pass


TerminationReason = Union[
    BoundaryContact, VerticalTangent, SymmetryPoint, MaxArcLength, StepUnderflow
]


@dataclass(frozen=True)
class TraceOptions:
    s_max: float = 50.0
    z_floor: float = 1e-6
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 1e-2
    event_tol: float = 1e-10
    #: "dopri5" (adaptive) or "rk4" (fixed step, no error control)
    method: str = "dopri5"
    #: cap on |delta theta| between samples; keeps chord/arc within 1e-6
    max_dtheta: float = 0.004
    #: terminate each direction after this many symmetry points (None: never)
    stop_at_symmetry: int | None = None
    #: geometric samples z_floor * 2**k, k = 1..levels, near the boundary
    boundary_levels: int = 8

    def __post_init__(self):
        for name in ("s_max", "z_floor", "rel_tol", "abs_tol", "max_step",
                     "event_tol", "max_dtheta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        if self.z_floor >= 1:
            raise ValueError("z_floor must be < 1")
        if self.method not in ("dopri5", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.stop_at_symmetry is not None and self.stop_at_symmetry < 1:
            raise ValueError("stop_at_symmetry must be >= 1 or None")
        if self.boundary_levels < 0:
            raise ValueError("boundary_levels must be >= 0")


@dataclass(frozen=True, eq=False)
class GeneratingCurve:
    """Samples ``(s, x, z, theta)`` ordered by strictly increasing ``s``."""

    samples: np.ndarray
    spec: object
    ic: InitialConditions
    left_end: TerminationReason
    right_end: TerminationReason
    #: critical points of z(s) located during integration
    symmetry_points: tuple = ()
    options: TraceOptions = field(default_factory=TraceOptions)

    def __len__(self):
        return len(self.samples)

    @property
    def s(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def x(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def theta(self) -> np.ndarray:
        return self.samples[:, 3]

    def states(self) -> list[CurveState]:
        return [CurveState(*row) for row in self.samples.tolist()]

    def end_reason(self, end: str) -> TerminationReason:
        if end not in ("left", "right"):
            raise ValueError(f"end must be 'left' or 'right', got {end!r}")
        return self.left_end if end == "left" else self.right_end


# -- governing system -------------------------------------------------------

def _gauss_D(K, sn, c):
    # K + sin^2, written to avoid cancellation when sin^2 is close to 1
    if sn * sn > 0.5:
        return (K + 1.0) - c * c
    return K + sn * sn


def rates_for(spec, event_tol: float = 1e-10):
    """Return ``rates(z, theta) -> (dx, dz, dtheta)`` for a traceable spec."""
    if isinstance(spec, GaussConstant):
        K = spec.K

        def rates(z, th):
            if not z > 0:
                raise NonpositiveHeight(f"z = {z}")
            c = math.cos(th)
            if abs(c) <= event_tol:
                raise SingularVerticalTangent(f"cos(theta) = {c}")
            sn = math.sin(th)
            return c, sn, _gauss_D(K, sn, c) / (z * c)

        return rates
    if isinstance(spec, LinearPrincipal):
        if spec.trivial_kind is not None:
            raise UnsupportedSpec(f"trivial relation {spec.trivial_kind.value}")
        d = spec.offset
        mm1 = spec.m - 1.0

        def rates(z, th):
            if not z > 0:
                raise NonpositiveHeight(f"z = {z}")
            # (m-1)cos(th) + n == (n+m-1) - 2(m-1)sin^2(th/2)
            hs = math.sin(0.5 * th)
            return math.cos(th), math.sin(th), (d - 2.0 * mm1 * hs * hs) / z

        return rates
    raise UnsupportedSpec(f"cannot trace {type(spec).__name__}")


def derivative(spec, state: CurveState, event_tol: float = 1e-10):
    """Right-hand side ``(x', z', theta')`` of the governing system at ``state``."""
    return rates_for(spec, event_tol)(state.z, state.theta)


def _theta_mode_rhs(K):
    def f(th, y):
        c = math.cos(th)
        sn = math.sin(th)
        w = y[2] * c / _gauss_D(K, sn, c)
        return (w, w * c, w * sn)
    return f


# -- integration ------------------------------------------------------------

def _bisect(state_at, g, y_lo, y_hi, tol, both=False):
    """Shrink a sign-change bracket of ``g`` over step fractions ``[0, 1]``."""
    lo, hi = 0.0, 1.0
    g_lo, g_hi = g(y_lo), g(y_hi)
    for _ in range(200):
        done = abs(g_lo) <= tol and abs(g_hi) <= tol if both else \
            min(abs(g_lo), abs(g_hi)) <= tol
        if done:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        y_mid = state_at(mid)
        g_mid = g(y_mid)
        if g_mid == 0.0 and not both:
            return mid, y_mid, mid, y_mid
        if (g_mid > 0) == (g_lo > 0):
            lo, y_lo, g_lo = mid, y_mid, g_mid
        else:
            hi, y_hi, g_hi = mid, y_mid, g_mid
    return lo, y_lo, hi, y_hi


class _Half:
    """One direction of a trace."""

    def __init__(self, spec, theta0, opts: TraceOptions, direction: int):
        self.spec = spec
        self.opts = opts
        self.d = direction
        self.rates = rates_for(spec, opts.event_tol)
        self.adaptive = opts.method == "dopri5"
        self.step = _rk.dopri5_step if self.adaptive else _rk.rk4_step
        self.samples = [(0.0, 0.0, 1.0, theta0)]
        self.symmetry = []
        self.levels = [opts.z_floor * 2.0 ** k
                       for k in range(opts.boundary_levels, 0, -1)]
        self.gauss = isinstance(spec, GaussConstant)

    def _append(self, row):
        last = self.samples[-1]
        if abs(row[0] - last[0]) < MIN_SAMPLE_GAP:
            if len(self.samples) == 1:
                return
            self.samples[-1] = row
        else:
            self.samples.append(row)

    def run(self) -> TerminationReason:
        o = self.opts
        rates = self.rates

        def fs(t, y):
            return rates(y[1], y[2])

        t, y = 0.0, self.samples[0][1:]
        if self.gauss and self._wants_theta_mode(y):
            return self._theta_mode(t, y)
        h = o.max_step
        k1 = None
        for _ in range(_MAX_STEPS):
            remaining = o.s_max - abs(t)
            if remaining <= 0.0:
                return MaxArcLength()
            if k1 is None:
                try:
                    k1 = fs(t, y)
                except (SingularVerticalTangent, NonpositiveHeight):
                    return StepUnderflow()
            hh = min(h, o.max_step, remaining)
            if k1[2] != 0.0:
                hh = min(hh, o.max_dtheta / abs(k1[2]))
            if hh < 1e-14 * max(1.0, abs(t)):
                return StepUnderflow()
            try:
                y1, err, k7 = self.step(fs, t, y, self.d * hh, k1)
            except (SingularVerticalTangent, NonpositiveHeight):
                h = 0.25 * hh
                continue
            en = 0.0
            if self.adaptive:
                en = _rk.error_norm(err, y, y1, o.rel_tol, o.abs_tol)
                if not en <= 1.0:
                    h = hh * (0.2 if not math.isfinite(en) else max(0.2, 0.9 * en ** -0.2))
                    continue
            dth = abs(y1[2] - y[2])
            if dth > o.max_dtheta:
                h = 0.9 * hh * o.max_dtheta / dth
                continue
            t1 = t + self.d * hh
            if abs(remaining - hh) <= 1e-15 * o.s_max:
                t1 = math.copysign(o.s_max, self.d)
            end = self._events(fs, t, y, k1, t1, y1, hh)
            if end is not None:
                return end
            self._append((t1,) + y1)
            t, y = t1, y1
            k1 = k7 if k7 is not None else None
            h = hh * _rk.step_factor(en) if self.adaptive else o.max_step
            if self.gauss and self._wants_theta_mode(y):
                return self._theta_mode(t, y)
        return StepUnderflow()

    def _wants_theta_mode(self, y) -> bool:
        c = math.cos(y[2])
        if abs(c) >= VERTICAL_SWITCH or self.spec.K == -1.0:
            return False
        return abs(_gauss_D(self.spec.K, math.sin(y[2]), c)) >= 0.01

    def _events(self, fs, t, y, k1, t1, y1, hh):
        """Handle events inside the accepted step ``(t, y) -> (t1, y1)``."""
        o = self.opts
        d = self.d

        def state_at(tau):
            if tau >= 1.0:
                return y1
            if tau <= 0.0:
                return y
            return self.step(fs, t, y, d * hh * tau, k1)[0]

        def full(tau, yy):
            return (t + (t1 - t) * tau,) + tuple(yy)

        found = []
        if y1[1] <= o.z_floor:
            lo, y_lo, hi, y_hi = _bisect(
                state_at, lambda yy: yy[1] - o.z_floor, y, y1, o.event_tol, both=True)
            found.append((lo, 2, "boundary", full(lo, y_lo), full(hi, y_hi)))
        for level in self.levels:
            if y[1] > level >= y1[1]:
                lo, y_lo, hi, y_hi = _bisect(
                    state_at, lambda yy, L=level: yy[1] - L, y, y1, o.event_tol)
                best = y_lo if abs(y_lo[1] - level) <= abs(y_hi[1] - level) else y_hi
                tau = lo if best is y_lo else hi
                found.append((tau, 1, "level", full(tau, best), None))
        g0, g1 = math.sin(y[2]), math.sin(y1[2])
        if g0 != 0.0 and (g0 * g1 < 0.0 or g1 == 0.0):
            lo, y_lo, hi, y_hi = _bisect(
                state_at, lambda yy: math.sin(yy[2]), y, y1, o.event_tol)
            use_lo = abs(math.sin(y_lo[2])) <= abs(math.sin(y_hi[2]))
            tau, best = (lo, y_lo) if use_lo else (hi, y_hi)
            found.append((tau, 0, "symmetry", full(tau, best), None))
        found.sort(key=lambda e: (e[0], e[1]))
        for tau, _, kind, row, extra in found:
            if kind == "boundary":
                self._append(row)
                return BoundaryContact(z_final=extra[2], theta_final=extra[3])
            if kind == "level":
                self._append(row)
                continue
            self.symmetry.append(CurveState(*row))
            if o.stop_at_symmetry is not None and len(self.symmetry) >= o.stop_at_symmetry:
                self._append(row)
                return SymmetryPoint(s=row[0], theta=row[3])
        return None

    def _theta_mode(self, t, y):
        """Final approach to a vertical tangent with theta as the parameter."""
        o = self.opts
        K = self.spec.K
        th = y[2]
        c = math.cos(th)
        going_up = (_gauss_D(K, math.sin(th), c) / c) * self.d > 0
        if going_up:
            target = (math.floor(th / math.pi - 0.5) + 1.5) * math.pi
        else:
            target = (math.ceil(th / math.pi - 0.5) - 0.5) * math.pi
        sgn = 1.0 if going_up else -1.0
        f = _theta_mode_rhs(K)
        u = (t, y[0], y[1])          # (s, x, z) as functions of theta
        h = o.max_dtheta
        for _ in range(_MAX_STEPS):
            gap = abs(target - th)
            if gap == 0.0:
                return VerticalTangent(s=u[0])
            hh = min(h, o.max_dtheta)
            last = gap <= hh
            if last:
                hh = gap
            u1, err, _ = self.step(f, th, u, sgn * hh)
            en = 0.0
            if self.adaptive:
                en = _rk.error_norm(err, u, u1, o.rel_tol, o.abs_tol)
                if not en <= 1.0:
                    h = hh * max(0.2, 0.9 * en ** -0.2) if math.isfinite(en) else 0.2 * hh
                    if h < 1e-15:
                        return StepUnderflow()
                    continue
            th1 = target if last else th + sgn * hh

            def state_at(tau, th=th, u=u, hh=hh):
                if tau >= 1.0:
                    return u1
                return self.step(f, th, u, sgn * hh * tau)[0]

            if u1[2] <= o.z_floor:
                lo, u_lo, hi, u_hi = _bisect(
                    state_at, lambda v: v[2] - o.z_floor, u, u1, o.event_tol, both=True)
                self._append((u_lo[0], u_lo[1], u_lo[2], th + sgn * hh * lo))
                return BoundaryContact(z_final=u_hi[2], theta_final=th + sgn * hh * hi)
            if abs(u1[0]) > o.s_max:
                lo, u_lo, _, _ = _bisect(
                    state_at, lambda v: o.s_max - abs(v[0]), u, u1, o.event_tol)
                self._append((u_lo[0], u_lo[1], u_lo[2], th + sgn * hh * lo))
                return MaxArcLength()
            self._append((u1[0], u1[1], u1[2], th1))
            th, u = th1, u1
            h = hh * _rk.step_factor(en) if self.adaptive else o.max_dtheta
        return StepUnderflow()


def _check_traceable(spec):
    if isinstance(spec, GaussConstant):
        return
    if isinstance(spec, LinearPrincipal) and spec.trivial_kind is None:
        return
    raise UnsupportedSpec(f"cannot trace {spec!r}")


def trace(spec, ic: InitialConditions | None = None,
          opts: TraceOptions | None = None) -> GeneratingCurve:
    """Integrate the generating curve in both directions from ``s = 0``."""
    _check_traceable(spec)
    ic = ic if ic is not None else InitialConditions()
    opts = opts if opts is not None else TraceOptions()
    halves = []
    for direction in (-1, 1):
        half = _Half(spec, ic.theta0, opts, direction)
        end = half.run()
        halves.append((half, end))
    (left, left_end), (right, right_end) = halves
    rows = left.samples[:0:-1] + right.samples
    sym = list(reversed(left.symmetry))
    if abs(math.sin(ic.theta0)) <= opts.event_tol:
        sym.append(CurveState(0.0, 0.0, 1.0, ic.theta0))
    sym.extend(right.symmetry)
    return GeneratingCurve(
        samples=np.array(rows, dtype=float),
        spec=spec, ic=ic, left_end=left_end, right_end=right_end,
        symmetry_points=tuple(sym), options=opts,
    )


# -- evaluation between samples ---------------------------------------------

def _hermite(s, r0, r1):
    h = r1[0] - r0[0]
    u = (s - r0[0]) / h
    h00 = (1 + 2 * u) * (1 - u) ** 2
    h10 = u * (1 - u) ** 2
    h01 = u * u * (3 - 2 * u)
    h11 = u * u * (u - 1)
    x = h00 * r0[1] + h10 * h * math.cos(r0[3]) + h01 * r1[1] + h11 * h * math.cos(r1[3])
    z = h00 * r0[2] + h10 * h * math.sin(r0[3]) + h01 * r1[2] + h11 * h * math.sin(r1[3])
    th = r0[3] + u * (r1[3] - r0[3])
    return CurveState(s, x, z, th)


def state_at(curve: GeneratingCurve, s: float) -> CurveState:
    """Curve state at arc parameter ``s`` within the sampled range.

    Recorded symmetry points are returned as-is.  Elsewhere the governing
    system is integrated from the preceding sample (a sub-step of an
    accepted step), with cubic Hermite interpolation as a fallback near
    singular vertical tangents.
    """
    svals = curve.s
    if not svals[0] <= s <= svals[-1]:
        raise ValueError(f"s = {s} outside sampled range [{svals[0]}, {svals[-1]}]")
    for p in curve.symmetry_points:
        if p.s == s:
            return p
    i = int(np.searchsorted(svals, s, side="right")) - 1
    i = min(max(i, 0), len(svals) - 1)
    r0 = curve.samples[i].tolist()
    if r0[0] == s or i == len(svals) - 1:
        return CurveState(*r0)
    r1 = curve.samples[i + 1].tolist()
    if isinstance(curve.spec, GaussConstant) and (
            abs(math.cos(r0[3])) < VERTICAL_SWITCH or abs(math.cos(r1[3])) < VERTICAL_SWITCH):
        return _hermite(s, r0, r1)
    try:
        rates = rates_for(curve.spec, curve.options.event_tol)
        y, _, _ = _rk.dopri5_step(lambda t, yy: rates(yy[1], yy[2]), r0[0],
                                  tuple(r0[1:]), s - r0[0])
    except (SingularVerticalTangent, NonpositiveHeight, UnsupportedSpec):
        return _hermite(s, r0, r1)
    return CurveState(s, *y)


def _mirror_reason(reason, s0, theta0):
    """End reason seen from the other side of the mirror ``s -> 2*s0 - s``."""
    if isinstance(reason, VerticalTangent):
        return VerticalTangent(2 * s0 - reason.s)
    if isinstance(reason, BoundaryContact):
        return BoundaryContact(reason.z_final, 2 * theta0 - reason.theta_final)
    if isinstance(reason, SymmetryPoint):
        return SymmetryPoint(2 * s0 - reason.s, 2 * theta0 - reason.theta)
    return reason


def reflect_extend(curve: GeneratingCurve, s0: float) -> GeneratingCurve:
    """Continue ``curve`` past the critical point ``s0`` by mirror symmetry.

    A critical point of z(s) makes the curve symmetric about the vertical
    line through it, so the part with ``s <= s0`` reflected across that line
    (and run backwards in ``s``) is the continuation for ``s > s0``.
    """
    p = state_at(curve, s0)
    if abs(math.sin(p.theta)) > curve.options.event_tol:
        raise NotAnExtremum(f"sin(theta) = {math.sin(p.theta):.3e} at s = {s0}")
    keep = curve.samples[curve.s < s0]
    head = np.vstack([keep, np.array([[p.s, p.x, p.z, p.theta]])])
    mirrored = keep[::-1].copy()
    mirrored[:, 0] = 2.0 * p.s - mirrored[:, 0]
    mirrored[:, 1] = 2.0 * p.x - mirrored[:, 1]
    mirrored[:, 3] = 2.0 * p.theta - mirrored[:, 3]
    sym = [q for q in curve.symmetry_points if q.s <= s0]
    if not any(q.s == p.s for q in sym):
        sym.append(p)
    sym += [CurveState(2 * p.s - q.s, 2 * p.x - q.x, q.z, 2 * p.theta - q.theta)
            for q in reversed(sym) if q.s < p.s]
    right = _mirror_reason(curve.left_end, p.s, p.theta)
    return replace(curve, samples=np.vstack([head, mirrored]), right_end=right,
                   symmetry_points=tuple(sym))


__all__ = [
    "CurveState", "BoundaryContact", "VerticalTangent", "SymmetryPoint",
    "MaxArcLength", "StepUnderflow", "TraceOptions", "GeneratingCurve",
    "derivative", "rates_for", "trace", "state_at", "reflect_extend",
]
