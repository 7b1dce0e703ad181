"""A-priori regime reports and their verification against traced curves."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import analysis, closedform
from .errors import NotPeriodic, Undefined
from .odetrace import BoundaryContact, GeneratingCurve, MaxArcLength
from .params import (
    GaussConstant, Kappa1Constant, Kappa2Constant, LinearPrincipal, Regime,
    _snap, normalize_angle, regime_of,
)

HEIGHT_TOL = 1e-6
ANGLE_TOL = 1e-3
RESIDUAL_TOL = 1e-8
ASYMPTOTIC_Z = 1e-3

CONVEX, CONCAVE, FLAT, MIXED = "Convex", "Concave", "Flat", "Mixed"


@dataclass(frozen=True)
class PredictedFeatures:
    """Qualitative shape of a curve.  ``None`` means no claim is made."""

    is_graph: bool | None = None
    convexity: str | None = None
    num_minima: int | None = None
    num_maxima: int | None = None
    has_self_intersections: bool | None = None
    periodic: bool | None = None
    complete_proxy: bool | None = None
    asymptotic_to_boundary: bool | None = None


@dataclass(frozen=True)
class Quantitative:
    height: float | None = None
    height_formula: float | None = None
    contact_angle: float | None = None
    boundary_angle: float | None = None


@dataclass(frozen=True)
class ClassificationReport:
    regime: Regime
    theta0: float
    predicted: PredictedFeatures
    quantitative: Quantitative
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "theta0": self.theta0,
            "predicted": asdict(self.predicted),
            "quantitative": asdict(self.quantitative),
            "notes": list(self.notes),
        }


@dataclass
class VerificationOutcome:
    passed: bool
    mismatches: list = field(default_factory=list)       # (feature, predicted, measured)
    residual_summary: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mismatches": [list(m) for m in self.mismatches],
            "residual_summary": dict(self.residual_summary),
            "notes": list(self.notes),
        }


# Feature signature of each regime at its theorem's initial angle.  Counts
# are per period for the periodic regime and totals elsewhere.
_SIGNATURES = {
    Regime.K_POSITIVE: PredictedFeatures(True, CONVEX, 1, 0, False, False, False, False),
    Regime.HOROSPHERE: PredictedFeatures(True, FLAT, 0, 0, False, False, True, False),
    Regime.K_NEG_SHALLOW: PredictedFeatures(True, CONCAVE, 0, 1, False, False, True, False),
    Regime.K_GEODESIC: PredictedFeatures(True, CONCAVE, 0, 1, False, False, True, False),
    Regime.K_NEG_STEEP: PredictedFeatures(True, CONCAVE, 0, 1, False, False, False, False),
    Regime.LW_PERIODIC: PredictedFeatures(False, MIXED, 1, 1, True, True, True, False),
    Regime.LW_MIN_SELF_INT: PredictedFeatures(False, MIXED, 1, 0, True, False, True, False),
    Regime.LW_CONVEX_GRAPH: PredictedFeatures(True, CONVEX, 1, 0, False, False, True, False),
    Regime.LW_HOROSPHERE: PredictedFeatures(True, FLAT, 0, 0, False, False, True, False),
    Regime.LW_ASYMPTOTIC: PredictedFeatures(False, MIXED, 0, 1, True, False, True, True),
    Regime.LW_CONCAVE_GRAPH: PredictedFeatures(True, CONCAVE, 0, 1, False, False, False, False),
}

# any constant-K curve is a graph over the boundary, hence embedded
_GAUSS_ANY_ANGLE = PredictedFeatures(is_graph=True, has_self_intersections=False)


def constant_pc_surface(spec) -> str:
    """Name of the surface family fixed by one constant principal curvature.

    With ``k2 = cos(theta)`` constant the curve is a Euclidean line at a
    fixed angle; with ``k1`` constant it is a Euclidean circle or line,
    and ``k1 = b/R`` for a circle of radius R centred at height b.
    """
    if isinstance(spec, Kappa2Constant):
        c = spec.c2
        if abs(c) > 1:
            raise Undefined(f"k2 = cos(theta) cannot equal {c}")
    elif isinstance(spec, Kappa1Constant):
        c = spec.c1
    else:
        raise TypeError(f"not a constant principal curvature relation: {spec!r}")
    c = _snap(_snap(abs(c), 0.0), 1.0)
    if c == 0:
        return "totally geodesic plane"
    if c < 1:
        return "equidistant surface"
    if c == 1:
        return "horosphere"
    return "horizontal right cylinder"


def predict(spec, theta0: float = 0.0) -> ClassificationReport:
    """Report the regime of ``spec`` started at angle ``theta0`` and the
    features and quantities the theory asserts for it."""
    theta0 = normalize_angle(theta0)
    regime = regime_of(spec, theta0)
    notes = []
    quant = Quantitative()
    if regime is Regime.CONSTANT_PC:
        notes.append(f"constant principal curvature: {constant_pc_surface(spec)}")
        return ClassificationReport(regime, theta0, PredictedFeatures(), quant, tuple(notes))

    if isinstance(spec, GaussConstant):
        if math.sin(theta0) != 0.0:
            notes.append("non-horizontal start: only the graph property is asserted")
            return ClassificationReport(regime, theta0, _GAUSS_ANY_ANGLE, quant, tuple(notes))
        K = spec.K
        feats = _SIGNATURES[regime]
        if regime is Regime.K_POSITIVE:
            h = closedform.height_exact(K)
            quant = Quantitative(height=h.log_ratio, height_formula=h.formula)
        elif regime is Regime.HOROSPHERE:
            quant = Quantitative(height=0.0)
        elif regime in (Regime.K_NEG_SHALLOW, Regime.K_GEODESIC):
            quant = Quantitative(boundary_angle=closedform.boundary_angle(max(K, -1.0)))
        elif regime is Regime.K_NEG_STEEP:
            h = closedform.height_exact(K)
            quant = Quantitative(height=h.log_ratio, height_formula=h.formula)
            notes.append(
                f"height: printed formula 0.5*log((K-1)/K) = {h.formula:.6f}; "
                f"log(z_max/z_min) from the end height sqrt((K+1)/K) = {h.log_ratio:.6f}"
            )
        return ClassificationReport(regime, theta0, feats, quant, tuple(notes))

    feats = _SIGNATURES[regime]
    if regime is Regime.LW_PERIODIC:
        if theta0 != 0.0:
            notes.append("the tangent turns through every angle, so any start lies on the same curve")
    elif regime is not Regime.LW_ASYMPTOTIC and theta0 != 0.0:
        notes.append("no statement for this starting angle")
        return ClassificationReport(regime, theta0, PredictedFeatures(), quant, tuple(notes))
    if regime is Regime.LW_CONCAVE_GRAPH:
        quant = Quantitative(contact_angle=math.acos(-spec.n / (spec.m - 1.0)))
    elif regime is Regime.LW_HOROSPHERE:
        quant = Quantitative(height=0.0)
    return ClassificationReport(regime, theta0, feats, quant, tuple(notes))


# -- measurement --------------------------------------------------------------

@dataclass(frozen=True)
class MeasuredFeatures:
    features: analysis.FeatureSet
    totals: PredictedFeatures
    per_period: PredictedFeatures | None


def period_window(curve: GeneratingCurve) -> tuple[float, float]:
    """Arc interval ``[a, b)`` of one period centred on the critical point
    nearest ``s = 0``: from the previous to the next critical point."""
    pts = analysis._critical_points(curve)
    i = min(range(len(pts)), key=lambda k: abs(pts[k].s))
    if 0 < i < len(pts) - 1:
        return pts[i - 1].s, pts[i + 1].s
    if i + 2 < len(pts):
        return pts[i].s, pts[i + 2].s
    raise NotPeriodic("not enough critical points for a full period")


def _complete_proxy(curve: GeneratingCurve, angles) -> bool:
    ends = (curve.left_end, curve.right_end)
    if all(isinstance(e, MaxArcLength) for e in ends):
        return True
    spec = curve.spec
    if all(isinstance(e, BoundaryContact) for e in ends) and isinstance(spec, GaussConstant):
        if -1.0 <= spec.K < 0.0:
            target = closedform.boundary_angle(spec.K)
            return all(a is not None and abs(a - target) <= ANGLE_TOL for a in angles)
    return False


def _asymptotic(curve: GeneratingCurve) -> bool:
    ends = (curve.left_end, curve.right_end)
    return (all(isinstance(e, MaxArcLength) for e in ends)
            and curve.z[0] < ASYMPTOTIC_Z and curve.z[-1] < ASYMPTOTIC_Z)


def measure(curve: GeneratingCurve) -> MeasuredFeatures:
    fs = analysis.features(curve)
    common = dict(
        is_graph=fs.is_graph_over_boundary,
        convexity=fs.convexity,
        periodic=fs.period_x is not None,
        complete_proxy=_complete_proxy(curve, fs.contact_angles),
        asymptotic_to_boundary=_asymptotic(curve),
    )
    totals = PredictedFeatures(
        num_minima=len(fs.minima), num_maxima=len(fs.maxima),
        has_self_intersections=bool(fs.self_intersections), **common,
    )
    per_period = None
    if fs.period_x is not None:
        a, b = period_window(curve)
        per_period = PredictedFeatures(
            num_minima=sum(a <= s < b for s in fs.minima),
            num_maxima=sum(a <= s < b for s in fs.maxima),
            has_self_intersections=any(
                a <= c.s_a < b and a <= c.s_b < b for c in fs.self_intersections),
            **common,
        )
    return MeasuredFeatures(fs, totals, per_period)


def _compare(pred: PredictedFeatures, meas: MeasuredFeatures) -> list:
    basis = meas.per_period if pred.periodic and meas.per_period is not None else meas.totals
    out = []
    for name, want in asdict(pred).items():
        if want is None:
            continue
        got = getattr(basis, name)
        if got != want:
            out.append((name, want, got))
    return out


def matching_regimes(curve: GeneratingCurve, measured: MeasuredFeatures | None = None) -> list[Regime]:
    """Regimes of the curve's family whose feature signature fits the curve.

    Constant-K and linear regimes are matched separately: the flat
    horosphere appears in both families with the same signature.  The
    geodesic case is told apart from the shallow one by its right-angle
    contact.
    """
    meas = measured or measure(curve)
    is_gauss = isinstance(curve.spec, GaussConstant)
    angles = [a for a in meas.features.contact_angles if a is not None]
    out = []
    for regime, sig in _SIGNATURES.items():
        if regime.is_gauss != is_gauss:
            continue
        if _compare(sig, meas):
            continue
        if regime in (Regime.K_GEODESIC, Regime.K_NEG_SHALLOW):
            right = bool(angles) and all(abs(a - math.pi / 2) <= ANGLE_TOL for a in angles)
            if right != (regime is Regime.K_GEODESIC):
                continue
        out.append(regime)
    return out


# -- verification -------------------------------------------------------------

def residuals(spec, curve: GeneratingCurve) -> dict:
    out = {"weingarten": analysis.weingarten_residual(spec, curve)}
    if isinstance(spec, GaussConstant):
        out["first_integral"] = analysis.first_integral_residual(curve)
    elif isinstance(spec, LinearPrincipal):
        out["integral_identity"] = analysis.integral_identity_residual(curve, spec.m, spec.n)
        out["second_integral"] = analysis.second_integral_residual(curve, spec.m, spec.n)
    return out


_GATED = ("weingarten", "first_integral")


def verify(spec, curve: GeneratingCurve, report: ClassificationReport) -> VerificationOutcome:
    """Check a traced curve against the predictions in ``report``.

    Qualitative features must match exactly; heights agree to 1e-6 and
    angles to 1e-3; the relation residual and, for constant K, the first
    integral must stay below 1e-8.  The integral identities of the linear
    relation are reported but not gated, since dividing by z near the
    boundary turns integrator drift into large values.
    """
    notes = list(report.notes)
    meas = measure(curve)
    mismatches = _compare(report.predicted, meas)
    q = report.quantitative
    fs = meas.features

    if q.height is not None:
        h = analysis.measured_height(curve)
        if not abs(h - q.height) <= HEIGHT_TOL:
            mismatches.append(("height", q.height, h))
        if q.height_formula is not None and abs(q.height_formula - h) > HEIGHT_TOL:
            notes.append(f"measured height {h:.6f} differs from the printed formula {q.height_formula:.6f}")
    for name, want in (("contact_angle", q.contact_angle), ("boundary_angle", q.boundary_angle)):
        if want is None:
            continue
        for end, got in zip(("left", "right"), fs.contact_angles):
            if got is None or not abs(got - want) <= ANGLE_TOL:
                mismatches.append((f"{name}[{end}]", want, got))

    res = residuals(spec, curve)
    failed = [k for k in _GATED if k in res and not res[k] <= RESIDUAL_TOL]
    for k in failed:
        notes.append(f"{k} residual {res[k]:.3e} exceeds {RESIDUAL_TOL:g}")
    if report.predicted.asymptotic_to_boundary:
        notes.append(f"end heights z = {curve.z[0]:.3e}, {curve.z[-1]:.3e}")
    passed = not mismatches and not failed
    return VerificationOutcome(passed, mismatches, res, notes)


def perturbed(curve: GeneratingCurve, dz: float = 1e-3, seed: int = 0) -> GeneratingCurve:
    """Copy of ``curve`` with every height shifted by a random amount of
    size ``dz``; used as a negative control for :func:`verify`."""
    rng = np.random.default_rng(seed)
    samples = curve.samples.copy()
    samples[:, 2] += dz * rng.choice([-1.0, 1.0], size=len(samples))
    return replace(curve, samples=samples)
