"""Single-step Runge-Kutta kernels for small autonomous-or-not systems.

States are plain tuples of floats; the systems traced here are three
dimensional, where tuple arithmetic beats numpy dispatch by a wide margin.
"""
from __future__ import annotations

import math

# Dormand-Prince 5(4), FSAL
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# difference between the 5th and embedded 4th order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _axpy(y, h, coeffs, ks):
    out = list(y)
    for c, k in zip(coeffs, ks):
        if c:
            hc = h * c
            for i in range(len(out)):
                out[i] += hc * k[i]
    return tuple(out)


def dopri5_step(f, t, y, h, k1=None):
    """One Dormand-Prince step.

    Returns ``(y_new, err_vec, k7)`` where ``err_vec`` is the local error
    estimate (already scaled by ``h``) and ``k7 = f(t + h, y_new)`` can seed
    the next step.
    """
    if k1 is None:
        k1 = f(t, y)
    ks = [k1]
    for j in range(1, 7):
        ks.append(f(t + _C[j] * h, _axpy(y, h, _A[j], ks)))
    y_new = _axpy(y, h, _A[6], ks[:6])
    err = [0.0] * len(y)
    for c, k in zip(_E, ks):
        if c:
            for i in range(len(err)):
                err[i] += c * k[i]
    return y_new, tuple(h * e for e in err), ks[6]


def rk4_step(f, t, y, h, k1=None):
    """Classical fourth-order step; same return shape as :func:`dopri5_step`."""
    if k1 is None:
        k1 = f(t, y)
    k2 = f(t + h / 2, _axpy(y, h, (0.5,), [k1]))
    k3 = f(t + h / 2, _axpy(y, h, (0.0, 0.5), [k1, k2]))
    k4 = f(t + h, _axpy(y, h, (0.0, 0.0, 1.0), [k1, k2, k3]))
    y_new = _axpy(y, h, (1 / 6, 1 / 3, 1 / 3, 1 / 6), [k1, k2, k3, k4])
    return y_new, (0.0,) * len(y), None


def error_norm(err, y0, y1, rtol, atol):
    acc = 0.0
    for e, a, b in zip(err, y0, y1):
        sc = atol + rtol * max(abs(a), abs(b))
        acc += (e / sc) ** 2
    return math.sqrt(acc / len(err))


def step_factor(err_norm: float) -> float:
    if err_norm == 0.0:
        return 5.0
    return min(5.0, max(0.2, 0.9 * err_norm ** -0.2))
