"""Airy functions Ai and Bi for real arguments, without external special functions.

* Maclaurin series where cancellation is mild,
* asymptotic expansions (truncated at the smallest term) for large ``|z|``,
* for decaying ``Ai`` on ``2 < z < 9``: Taylor continuation of the Airy ODE
  inward from the asymptotic value at ``z = 9``, the direction in which Ai
  dominates and errors do not grow.

Absolute accuracy is about 1e-10 or better everywhere; relative accuracy on the
positive axis is near machine precision.
"""
import math

import numpy as np

__all__ = ["airy_ai", "airy_bi"]

AI0 = 0.355028053887817239260063186004  # Ai(0)
AIP0 = 0.258819403792806798405183560189  # -Ai'(0)
SQRT3 = math.sqrt(3.0)
SQRTPI = math.sqrt(math.pi)

_SERIES_NEG = 7.0
_AI_SERIES_POS = 2.0
_FAR = 9.0


def _asym_coeffs(n=40):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1)))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return u, v


_U, _V = _asym_coeffs()


def _maclaurin(z):
    """Return (f, g) with Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g)."""
    z3 = z * z * z
    f = t = 1.0
    g = s = z
    k = 1
    while True:
        t *= z3 / ((3 * k - 1) * (3 * k))
        s *= z3 / ((3 * k) * (3 * k + 1))
        f += t
        g += s
        if abs(t) <= 1e-17 * abs(f) and abs(s) <= 1e-17 * max(abs(g), 1e-300):
            break
        k += 1
        if k > 400:
            break
    return f, g


def _alt_sum(coeffs, x, sign):
    """sum c_k (sign x)^k truncated at the smallest term."""
    total = 0.0
    prev = math.inf
    p = 1.0
    for c in coeffs:
        term = c * p
        if abs(term) > prev:
            break
        total += term
        prev = abs(term)
        p *= sign * x
    return total


def _ai_asym_pos(z):
    zeta = 2.0 / 3.0 * z**1.5
    w = 1.0 / zeta
    pre = math.exp(-zeta) / (2.0 * SQRTPI)
    ai = pre / z**0.25 * _alt_sum(_U, w, -1.0)
    aip = -pre * z**0.25 * _alt_sum(_V, w, -1.0)
    return ai, aip


def _bi_asym_pos(z):
    zeta = 2.0 / 3.0 * z**1.5
    return math.exp(zeta) / (SQRTPI * z**0.25) * _alt_sum(_U, 1.0 / zeta, 1.0)


def _asym_neg(z):
    """Ai(-z), Bi(-z) for large positive z."""
    zeta = 2.0 / 3.0 * z**1.5
    w2 = 1.0 / (zeta * zeta)
    P = _alt_sum(_U[0::2], w2, -1.0)
    Q = _alt_sum(_U[1::2], w2, -1.0) / zeta
    ph = zeta - math.pi / 4.0
    amp = 1.0 / (SQRTPI * z**0.25)
    return amp * (math.cos(ph) * P + math.sin(ph) * Q), amp * (-math.sin(ph) * P + math.cos(ph) * Q)


def _taylor_step(z0, y, yp, dz, tol=1e-17):
    """Advance y'' = z y from z0 to z0 + dz with the exact Taylor recurrence."""
    a1 = yp
    val = y + a1 * dz
    der = a1
    coeffs = [y, a1]
    n = 0
    while True:
        # a_{n+2} = (z0 a_n + a_{n-1}) / ((n+2)(n+1))
        an = coeffs[n]
        anm1 = coeffs[n - 1] if n >= 1 else 0.0
        nxt = (z0 * an + anm1) / ((n + 2) * (n + 1))
        coeffs.append(nxt)
        m = n + 2
        term = nxt * dz**m
        val += term
        der += m * nxt * dz ** (m - 1)
        n += 1
        if n > 6 and abs(term) <= tol * max(abs(val), 1e-300):
            break
        if n > 200:
            break
    return val, der


def _ai_scalar(z):
    if z <= -_SERIES_NEG:
        return _asym_neg(-z)[0]
    if z <= _AI_SERIES_POS:
        f, g = _maclaurin(z)
        return AI0 * f - AIP0 * g
    if z >= _FAR:
        return _ai_asym_pos(z)[0]
    y, yp = _ai_asym_pos(_FAR)
    z0 = _FAR
    nsteps = max(1, int(math.ceil((_FAR - z) / 0.25)))
    dz = (z - _FAR) / nsteps
    for _ in range(nsteps):
        y, yp = _taylor_step(z0, y, yp, dz)
        z0 += dz
    return y


def _bi_scalar(z):
    if z <= -_SERIES_NEG:
        return _asym_neg(-z)[1]
    if z >= _FAR:
        return _bi_asym_pos(z)
    f, g = _maclaurin(z)
    return SQRT3 * (AI0 * f + AIP0 * g)


def airy_ai(z):
    """Airy function of the first kind for real ``z`` (scalar or array)."""
    if np.ndim(z) == 0:
        return _ai_scalar(float(z))
    return np.vectorize(_ai_scalar, otypes=[float])(z)


def airy_bi(z):
    """Airy function of the second kind for real ``z`` (scalar or array)."""
    if np.ndim(z) == 0:
        return _bi_scalar(float(z))
    return np.vectorize(_bi_scalar, otypes=[float])(z)
