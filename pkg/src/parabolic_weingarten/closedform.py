"""Closed-form generating curves for constant Gauss curvature, theta0 = 0.

With a horizontal initial tangent the height satisfies ``z'^2 = K(z^2 - 1)``,
hence ``z'' = K z`` and

* ``K > 0``:  ``z = cosh(sqrt(K) s)`` until ``z' = 1`` (vertical tangent);
* ``K = 0``:  the horizontal line ``z = 1``;
* ``K < 0``:  ``z = cos(sqrt(-K) s)``, ending at a vertical tangent when
  ``K < -1`` and on the ideal boundary ``z = 0`` when ``-1 <= K < 0``.

``x(s)`` has no elementary form and is computed by quadrature of
``sqrt(1 - z'(t)^2)``.  These functions serve as oracles for the tracer.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import quadrature
from .errors import OutOfDomain, OutOfRange, Undefined


class ProfileKind(enum.Enum):
    COSH = "Cosh"
    FLAT = "Flat"
    COS = "Cos"


@dataclass(frozen=True)
class KProfile:
    K: float

    @property
    def kind(self) -> ProfileKind:
        if self.K > 0:
            return ProfileKind.COSH
        if self.K == 0:
            return ProfileKind.FLAT
        return ProfileKind.COS

    @property
    def half_width(self) -> float:
        return domain_half_width(self.K)

    @property
    def has_vertical_ends(self) -> bool:
        return self.K > 0 or self.K < -1


@dataclass(frozen=True)
class HeightValues:
    """Two evaluations of the band height for one value of K.

    ``formula`` is the closed expression ``0.5*log((K+1)/K)`` for K > 0 and
    ``0.5*log((K-1)/K)`` for K < -1; ``log_ratio`` is ``log(z_max/z_min)``
    with the end height ``sqrt((K+1)/K)`` obtained from ``z'^2 = K(z^2-1)``
    at ``|z'| = 1``.  They coincide for K > 0 and differ for K < -1.
    """

    K: float
    formula: float
    log_ratio: float

    @property
    def agree(self) -> bool:
        return math.isclose(self.formula, self.log_ratio, rel_tol=1e-12, abs_tol=1e-15)


def domain_half_width(K: float) -> float:
    """Half-width of the maximal arc-length domain; ``inf`` for K = 0."""
    if K > 0:
        r = math.sqrt(K)
        return math.asinh(1.0 / r) / r
    if K == 0:
        return math.inf
    r = math.sqrt(-K)
    if K < -1:
        return math.asin(1.0 / r) / r
    return 0.5 * math.pi / r


def _check_domain(K, s):
    if abs(s) > domain_half_width(K) * (1 + 1e-15):
        raise OutOfDomain(f"|s| = {abs(s)} exceeds {domain_half_width(K)} for K = {K}")


def z_exact(K: float, s: float) -> float:
    _check_domain(K, s)
    if K > 0:
        return math.cosh(math.sqrt(K) * s)
    if K == 0:
        return 1.0
    return math.cos(math.sqrt(-K) * s)


def dz_exact(K: float, s: float) -> float:
    """``z'(s)``, which equals ``sin(theta(s))``."""
    if K > 0:
        r = math.sqrt(K)
        return r * math.sinh(r * s)
    if K == 0:
        return 0.0
    r = math.sqrt(-K)
    return -r * math.sin(r * s)


def theta_exact(K: float, s: float) -> float:
    """Tangent angle, in ``[-pi/2, pi/2]``."""
    _check_domain(K, s)
    return math.asin(max(-1.0, min(1.0, dz_exact(K, s))))


def _x_integrand(K):
    def f(t):
        p = dz_exact(K, t)
        return math.sqrt(max(0.0, (1.0 - p) * (1.0 + p)))
    return f


def x_exact(K: float, s: float, abs_tol: float = 1e-10) -> float:
    """``x(s) = int_0^s sqrt(1 - z'(t)^2) dt`` by adaptive quadrature.

    When the domain ends at a vertical tangent the integrand has a
    square-root zero at ``s_bar``; the substitution ``t = s_bar*sin(u)``
    turns it into a smooth integrand on ``[0, asin(s/s_bar)]``.
    """
    _check_domain(K, s)
    if s == 0:
        return 0.0
    if K == 0:
        return s
    f = _x_integrand(K)
    sign = 1.0 if s > 0 else -1.0
    s = abs(s)
    if KProfile(K).has_vertical_ends:
        sb = domain_half_width(K)
        u_end = math.asin(min(1.0, s / sb))

        def g(u):
            return f(sb * math.sin(u)) * sb * math.cos(u)

        val, _ = quadrature.integrate(g, 0.0, u_end, abs_tol)
    else:
        val, _ = quadrature.integrate(f, 0.0, s, abs_tol)
    return sign * val


def end_height(K: float) -> float:
    """z at the vertical-tangent end, ``sqrt((K+1)/K)``."""
    if not (K > 0 or K < -1):
        raise Undefined(f"no vertical-tangent end for K = {K}")
    return math.sqrt((K + 1.0) / K)


def height_exact(K: float) -> HeightValues:
    if K > 0:
        formula = 0.5 * math.log((K + 1.0) / K)
    elif K < -1:
        formula = 0.5 * math.log((K - 1.0) / K)
    else:
        raise Undefined(f"height is unbounded or undefined for K = {K}")
    z_end = end_height(K)
    log_ratio = abs(math.log(z_end))
    return HeightValues(K=K, formula=formula, log_ratio=log_ratio)


def boundary_angle(K: float) -> float:
    """Angle at which the curve meets z = 0, ``asin(sqrt(-K))``."""
    if not -1.0 <= K < 0.0:
        raise OutOfRange(f"curve meets the boundary only for -1 <= K < 0, got {K}")
    return math.asin(math.sqrt(-K))
