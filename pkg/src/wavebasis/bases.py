"""Basis pairs for ``u'' + k^2(x) u = 0``.

``NEW``
    ``C = cos sqrt(w)``, ``S = x sinc sqrt(w)`` with ``w = x int_0^x k^2``.
    Both are entire functions of ``w`` and stay finite through turning points.
``WKB``
    ``cos(phi) / sqrt(k)``, ``sin(phi) / sqrt(k)`` with ``phi = int_0^x k``.
``SIMPLE_WKB``
    ``cos(phi)``, ``sin(phi)``.
:class:`AiryImproved`
    Airy-function pair anchored at a turning point ``xi``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import profiles as _pr
from .airy import AI0, airy_ai, airy_bi
from .errors import ConfigError, PreconditionError
from .profiles import KsqProfile, integrate_k

__all__ = [
    "BasisKind",
    "AiryImproved",
    "BasisEvaluation",
    "cos_sqrt",
    "sinc_sqrt",
    "accumulated_ksq",
    "eval_basis",
    "solution_from_ic",
    "basis_derivative",
    "parse_basis_kind",
]

SERIES_CUTOFF = 1e-4
WKB_K_TOL = 1e-12


class BasisKind(enum.Enum):
    NEW = "new"
    WKB = "wkb"
    SIMPLE_WKB = "simple-wkb"


@dataclass(frozen=True)
class AiryImproved:
    """Airy pair anchored at the turning point ``xi``.

    ``form="printed"`` uses ``I^(1/6) / sqrt|k| * Ai(+-(3/2) I^(2/3))`` with
    ``I = |int_x^xi k|``; ``form="langer"`` uses the textbook arrangement
    ``(3I/2)^(1/6) / sqrt|k| * Ai(+-(3I/2)^(2/3))``.
    """

    xi: float
    form: str = "printed"

    def __post_init__(self):
        if self.form not in ("printed", "langer"):
            raise ConfigError(f"unknown Airy form {self.form!r}")


@dataclass(frozen=True)
class BasisEvaluation:
    C: float
    S: float
    kind: object
    x: float
    finite: bool = True


def parse_basis_kind(name: str, xi: float | None = None):
    """Map CLI names (``new``, ``wkb``, ``simple-wkb``, ``airy``) to kinds."""
    if name == "airy":
        if xi is None:
            raise ConfigError("the airy basis needs a turning point xi")
        return AiryImproved(xi)
    try:
        return BasisKind(name)
    except ValueError:
        raise ConfigError(f"unknown basis {name!r}") from None


# --------------------------------------------------------------------------
# entire functions of w


def cos_sqrt(w):
    """``cos(sqrt(w))`` as an entire function of ``w``.

    ``cosh(sqrt(-w))`` for negative real ``w``; complex ``w`` is accepted.
    Uses ``1 - w/2 + w^2/24 - w^3/720`` when ``|w| < 1e-4``.
    """
    w = np.asarray(w)
    cplx = np.iscomplexobj(w)
    out = np.empty(w.shape, dtype=complex if cplx else float)
    small = np.abs(w) < SERIES_CUTOFF
    ws = w[small]
    out[small] = 1 - ws / 2 + ws * ws / 24 - ws**3 / 720
    wb = w[~small]
    if cplx:
        out[~small] = np.cos(np.sqrt(wb))
    else:
        out[~small] = np.where(wb >= 0, np.cos(np.sqrt(np.abs(wb))), np.cosh(np.sqrt(np.abs(wb))))
    return out[()] if out.ndim == 0 else out


def sinc_sqrt(w):
    """``sin(sqrt(w)) / sqrt(w)`` as an entire function of ``w`` (1 at 0)."""
    w = np.asarray(w)
    cplx = np.iscomplexobj(w)
    out = np.empty(w.shape, dtype=complex if cplx else float)
    small = np.abs(w) < SERIES_CUTOFF
    ws = w[small]
    out[small] = 1 - ws / 6 + ws * ws / 120
    wb = w[~small]
    if cplx:
        r = np.sqrt(wb)
        out[~small] = np.sin(r) / r
    else:
        r = np.sqrt(np.abs(wb))
        out[~small] = np.where(wb >= 0, np.sin(r), np.sinh(r)) / r
    return out[()] if out.ndim == 0 else out


def accumulated_ksq(profile: KsqProfile, E: float, x):
    """Signed ``int_0^x k^2`` (vectorized, analytic)."""
    x = np.asarray(x, dtype=float)
    profile._check_domain(x)
    W = profile.potential.antiderivative(x)
    out = profile.prefactor * (E * x - W)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------


def _phase(profile, E, x):
    if x >= 0:
        return integrate_k(profile, E, 0.0, x)
    return -integrate_k(profile, E, x, 0.0)


def _wkb_scalar(kind, profile, E, x):
    phi = _phase(profile, E, x)
    c, s = math.cos(phi), math.sin(phi)
    if kind is BasisKind.SIMPLE_WKB:
        return c, s, True
    if x == 0 and profile.singular_at_zero:
        # k -> infinity at the singular point, so the 1/sqrt(k) amplitude vanishes
        return 0.0, 0.0, True
    ksq = float(profile.ksq(E, x))
    k = math.sqrt(max(ksq, 0.0))
    if k < WKB_K_TOL:
        return math.copysign(math.inf, c), math.copysign(math.inf, s), False
    amp = 1.0 / math.sqrt(k)
    return c * amp, s * amp, True


def _airy_scalar(kind, profile, E, x):
    xi = kind.xi
    q = float(profile.ksq(E, x))
    scale = max(1.0, abs(xi))
    if abs(x - xi) < 1e-10 * scale:
        h = 1e-6 * scale
        slope = abs(float(profile.ksq(E, xi + h)) - float(profile.ksq(E, xi - h))) / (2 * h)
        if slope == 0:
            raise PreconditionError(f"k^2 has zero slope at the Airy anchor {xi}")
        limit = slope ** (-1.0 / 6.0)
        if kind.form == "printed":
            limit *= (2.0 / 3.0) ** (1.0 / 6.0)
        return limit * AI0, limit * math.sqrt(3.0) * AI0, True
    lo, hi = sorted((x, xi))
    I = _pr._k_on_interval(profile, E, lo, hi, absolute=True)
    sign = -1.0 if q > 0 else 1.0
    if kind.form == "printed":
        arg = sign * 1.5 * I ** (2.0 / 3.0)
        pref = I ** (1.0 / 6.0)
    else:
        arg = sign * (1.5 * I) ** (2.0 / 3.0)
        pref = (1.5 * I) ** (1.0 / 6.0)
    pref /= math.sqrt(math.sqrt(abs(q)))
    return pref * airy_ai(arg), pref * airy_bi(arg), True


def eval_basis(kind, profile: KsqProfile, E: float, x) -> BasisEvaluation:
    """Evaluate a basis pair at ``x`` (scalar or array).

    WKB kinds at ``|k(x)| < 1e-12`` return ``finite=False`` with signed
    infinities.  For arrays, ``finite`` is a boolean array.
    """
    if isinstance(kind, str):
        kind = parse_basis_kind(kind)
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if kind is BasisKind.NEW:
        w = xa * accumulated_ksq(profile, E, xa)
        C = np.atleast_1d(cos_sqrt(w))
        S = xa * np.atleast_1d(sinc_sqrt(w))
        fin = np.ones(xa.shape, dtype=bool)
    else:
        profile._check_domain(xa)
        if isinstance(kind, AiryImproved):
            fn = _airy_scalar
        elif kind in (BasisKind.WKB, BasisKind.SIMPLE_WKB):
            fn = _wkb_scalar
        else:
            raise ConfigError(f"unknown basis kind {kind!r}")
        vals = [fn(kind, profile, E, float(t)) for t in xa]
        C = np.array([v[0] for v in vals])
        S = np.array([v[1] for v in vals])
        fin = np.array([v[2] for v in vals])
    if scalar:
        return BasisEvaluation(float(C[0]), float(S[0]), kind, float(xa[0]), bool(fin[0]))
    return BasisEvaluation(C, S, kind, xa, fin)


def solution_from_ic(kind, profile: KsqProfile, E: float, u0: float, up0: float, x):
    """``C(x) u0 + S(x) u'(0)``; divergent bases propagate as infinities."""
    ev = eval_basis(kind, profile, E, x)
    with np.errstate(invalid="ignore"):
        C = np.where(u0 == 0, 0.0, np.asarray(ev.C) * u0)
        S = np.where(up0 == 0, 0.0, np.asarray(ev.S) * up0)
        out = C + S
    return float(out) if np.ndim(out) == 0 else out


def basis_derivative(kind, profile: KsqProfile, E: float, x: float, h: float | None = None):
    """Fourth-order central differences ``(dC/dx, dS/dx)`` at ``x``."""
    if h is None:
        h = 1e-5 * max(1.0, abs(x))
    pts = x + h * np.array([-2.0, -1.0, 1.0, 2.0])
    ev = eval_basis(kind, profile, E, pts)
    w = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * h)
    return float(w @ ev.C), float(w @ ev.S)
