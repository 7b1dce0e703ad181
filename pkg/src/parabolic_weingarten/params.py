"""Parameter domain: curvature relations, initial data and regime labels.

A parabolic surface in the upper half-space model is swept by horizontal
translations along y, so it is fixed by its generating curve in the
xz-plane.  The curve is closed by one of two curvature relations:

* constant Gauss curvature ``K = k1*k2 - 1``;
* the linear relation ``k1 = m*k2 + n`` (the canonical form of
  ``a*k1 + b*k2 = c`` with ``a != 0``).

Relations with ``a == 0`` or ``b == 0`` fix one principal curvature and are
kept as :class:`Kappa2Constant` / :class:`Kappa1Constant`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

from .errors import DegenerateRelation, TrivialSpec

TWO_PI = 2.0 * math.pi

#: relative tolerance that snaps near-boundary parameters onto the boundary
BOUNDARY_RTOL = 1e-12


class TrivialKind(enum.Enum):
    UMBILIC = "Umbilic"
    CMC = "CMC"


class Regime(enum.Enum):
    K_POSITIVE = "KPositive"
    HOROSPHERE = "Horosphere"
    K_NEG_SHALLOW = "KNegShallow"
    K_GEODESIC = "KGeodesic"
    K_NEG_STEEP = "KNegSteep"
    LW_PERIODIC = "LWPeriodic"
    LW_MIN_SELF_INT = "LWMinSelfInt"
    LW_CONVEX_GRAPH = "LWConvexGraph"
    LW_HOROSPHERE = "LWHorosphere"
    LW_ASYMPTOTIC = "LWAsymptotic"
    LW_CONCAVE_GRAPH = "LWConcaveGraph"
    CONSTANT_PC = "ConstantPC"

    @property
    def is_gauss(self) -> bool:
        return self in _GAUSS_REGIMES

    @property
    def is_linear(self) -> bool:
        return self.value.startswith("LW")


_GAUSS_REGIMES = frozenset({
    Regime.K_POSITIVE, Regime.HOROSPHERE, Regime.K_NEG_SHALLOW,
    Regime.K_GEODESIC, Regime.K_NEG_STEEP,
})


def _snap(value: float, target: float, scale: float = 1.0) -> float:
    """Return ``target`` if ``value`` lies within the boundary tolerance of it."""
    if abs(value - target) <= BOUNDARY_RTOL * max(1.0, abs(scale), abs(target)):
        return target
    return value


@dataclass(frozen=True)
class GaussConstant:
    K: float

    def __post_init__(self):
        if not math.isfinite(self.K):
            raise ValueError(f"K must be finite, got {self.K!r}")


@dataclass(frozen=True)
class LinearPrincipal:
    """The relation ``k1 = m*k2 + n`` with ``m != 0`` and ``n >= 0``."""

    m: float
    n: float
    orientation_flipped: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.n)):
            raise ValueError(f"m, n must be finite, got ({self.m!r}, {self.n!r})")
        if self.m == 0:
            raise ValueError("m = 0 is a constant-k1 relation; use Kappa1Constant")
        if self.n < 0:
            raise ValueError(f"n must be >= 0 after normalization, got {self.n!r}")

    @property
    def offset(self) -> float:
        """``n + m - 1`` (equal to theta'(0) when theta0 = 0), snapped to 0."""
        return lw_offset(self.m, self.n)

    @property
    def trivial_kind(self) -> TrivialKind | None:
        m = _snap(self.m, -1.0)
        if m == -1.0:
            return TrivialKind.CMC
        if _snap(self.m, 1.0) == 1.0 and _snap(self.n, 0.0) == 0.0:
            return TrivialKind.UMBILIC
        return None


@dataclass(frozen=True)
class Kappa1Constant:
    c1: float


@dataclass(frozen=True)
class Kappa2Constant:
    c2: float


@dataclass(frozen=True)
class Trivial:
    kind: TrivialKind


WeingartenSpec = Union[GaussConstant, LinearPrincipal, Kappa1Constant, Kappa2Constant]
NormalizedOutcome = Union[LinearPrincipal, Trivial, Kappa1Constant, Kappa2Constant]


def normalize_angle(theta: float) -> float:
    """Reduce ``theta`` into ``[0, 2*pi)``."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    r = math.fmod(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r + 0.0  # drop a signed zero


@dataclass(frozen=True)
class InitialConditions:
    """Initial point and angle; x0 = 0 and z0 = 1 are fixed by isometry."""

    theta0: float = 0.0
    x0: float = field(default=0.0)
    z0: float = field(default=1.0)

    def __post_init__(self):
        if self.x0 != 0.0 or self.z0 != 1.0:
            raise ValueError("initial point is normalized to x0 = 0, z0 = 1")
        object.__setattr__(self, "theta0", normalize_angle(self.theta0))


def lw_offset(m: float, n: float) -> float:
    return _snap(n + m - 1.0, 0.0, max(abs(m), abs(n)))


def normalize_linear(a: float, b: float, c: float) -> NormalizedOutcome:
    """Bring ``a*k1 + b*k2 = c`` into canonical form.

    With ``a != 0`` this is ``k1 = m*k2 + n`` where ``m = -b/a`` and
    ``n = |c/a|``; a negative ``c/a`` is absorbed by reversing the surface
    normal, which negates both principal curvatures and hence only ``n``.
    """
    for v in (a, b, c):
        if not math.isfinite(v):
            raise ValueError(f"coefficients must be finite, got {(a, b, c)!r}")
    if a == 0 and b == 0:
        raise DegenerateRelation(f"a = b = 0 in {a}*k1 + {b}*k2 = {c}")
    if a == 0:
        return Kappa2Constant(c / b)
    if b == 0:
        return Kappa1Constant(c / a)
    m = -b / a
    q = c / a
    if _snap(m, -1.0) == -1.0:
        return Trivial(TrivialKind.CMC)
    if _snap(m, 1.0) == 1.0 and _snap(q, 0.0) == 0.0:
        return Trivial(TrivialKind.UMBILIC)
    return LinearPrincipal(m, abs(q), q < 0)


def regime_of(spec, theta0: float = 0.0) -> Regime:
    """Regime label for a normalized relation and starting angle."""
    theta0 = normalize_angle(theta0)
    if isinstance(spec, Trivial):
        raise TrivialSpec(f"{spec.kind.value} relation has no regime")
    if isinstance(spec, (Kappa1Constant, Kappa2Constant)):
        return Regime.CONSTANT_PC
    if isinstance(spec, GaussConstant):
        K = _snap(_snap(spec.K, 0.0), -1.0)
        if K > 0:
            return Regime.K_POSITIVE
        if K == 0:
            return Regime.HOROSPHERE
        if K == -1.0:
            return Regime.K_GEODESIC
        return Regime.K_NEG_SHALLOW if K > -1.0 else Regime.K_NEG_STEEP
    if isinstance(spec, LinearPrincipal):
        kind = spec.trivial_kind
        if kind is not None:
            raise TrivialSpec(f"{kind.value} relation (m={spec.m}, n={spec.n})")
        m, n = spec.m, _snap(spec.n, 0.0)
        d = lw_offset(m, n)
        if d > 0:
            if m < n + 1.0 and _snap(m, n + 1.0, n) != n + 1.0:
                return Regime.LW_PERIODIC
            return Regime.LW_MIN_SELF_INT if n > 0 else Regime.LW_CONVEX_GRAPH
        if d == 0:
            at_zero = theta0 <= BOUNDARY_RTOL or TWO_PI - theta0 <= BOUNDARY_RTOL
            return Regime.LW_HOROSPHERE if at_zero else Regime.LW_ASYMPTOTIC
        return Regime.LW_CONCAVE_GRAPH
    raise TypeError(f"not a Weingarten spec: {spec!r}")
