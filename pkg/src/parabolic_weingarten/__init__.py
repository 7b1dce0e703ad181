"""Generating curves of parabolic Weingarten surfaces in hyperbolic space.

Trace the curve for a curvature relation, measure its geometry, compare
with the predicted regime, and export curves, figures and meshes.
"""
from .errors import WeingartenError
from .params import (
    GaussConstant, InitialConditions, Kappa1Constant, Kappa2Constant, LinearPrincipal,
    Regime, Trivial, normalize_linear, regime_of,
)
from .odetrace import GeneratingCurve, TraceOptions, reflect_extend, state_at, trace
from .analysis import FeatureSet, features
from .classify import ClassificationReport, VerificationOutcome, predict, verify

__all__ = [
    "WeingartenError",
    "GaussConstant", "LinearPrincipal", "Kappa1Constant", "Kappa2Constant", "Trivial",
    "InitialConditions", "Regime", "normalize_linear", "regime_of",
    "GeneratingCurve", "TraceOptions", "trace", "state_at", "reflect_extend",
    "FeatureSet", "features",
    "ClassificationReport", "VerificationOutcome", "predict", "verify",
]
