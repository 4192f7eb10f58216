"""Potential and permittivity profiles, the wavenumber function and its integrals.

All profiles are frozen dataclasses.  A :class:`KsqProfile` couples a
potential ``V(x)`` with a prefactor so that ``k^2(x; E) = prefactor * (E - V(x))``;
for Schroedinger problems the prefactor is ``2 m / hbar^2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from scipy import integrate

from .errors import (
    ConfigError,
    DomainError,
    ForbiddenRegionError,
    IntegrationError,
    NoTurningPointError,
    PreconditionError,
    SingularPointError,
)

__all__ = [
    "PhysicalScales",
    "NORMALIZED",
    "PowerLaw",
    "SingularPowerLaw",
    "Harmonic",
    "PiecewiseConstant",
    "Tabulated",
    "HardWall",
    "OpticalSpec",
    "KsqProfile",
    "TurningPoints",
    "ksq_at",
    "turning_point",
    "integrate_ksq",
    "integrate_k",
    "potential_from_dict",
    "load_potential",
]

QUAD_TOL = 1e-10
TURNING_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalScales:
    """Mass and reduced Planck constant.  Defaults give ``hbar^2 / 2m = 1``."""

    mass: float = 0.5
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.hbar > 0):
            raise ConfigError(f"mass and hbar must be positive, got {self.mass}, {self.hbar}")

    @property
    def ksq_factor(self) -> float:
        """``2 m / hbar^2``."""
        return 2.0 * self.mass / self.hbar**2


NORMALIZED = PhysicalScales()


# --------------------------------------------------------------------------
# potentials
#
# Each potential implements value(x), antiderivative(x) = int_0^x V (or None),
# domain, is_even, singular_at_zero and closed_turning_point(E).


@dataclass(frozen=True)
class PowerLaw:
    """``V(x) = U |x|^alpha``."""

    U: float
    alpha: float

    kind = "power_law"
    is_even = True
    singular_at_zero = False
    domain = (-math.inf, math.inf)

    def __post_init__(self):
        if not (self.U > 0 and self.alpha > 0):
            raise ConfigError("power law needs U > 0 and alpha > 0")

    def value(self, x):
        return self.U * np.abs(x) ** self.alpha

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.U * np.abs(x) ** (self.alpha + 1) / (self.alpha + 1)

    def closed_turning_point(self, E):
        if not E > 0:
            raise PreconditionError(f"power-law turning point needs E > 0, got {E}")
        return (E / self.U) ** (1.0 / self.alpha)

    def to_dict(self):
        return {"type": self.kind, "U": self.U, "alpha": self.alpha}


@dataclass(frozen=True)
class SingularPowerLaw:
    """``V(x) = -U |x|^(-beta)`` with ``0 < beta < 1``."""

    U: float
    beta: float

    kind = "singular"
    is_even = True
    singular_at_zero = True
    domain = (-math.inf, math.inf)

    def __post_init__(self):
        if not self.U > 0:
            raise ConfigError("singular potential needs U > 0")
        if not 0 < self.beta < 1:
            raise ConfigError(f"singular potential needs 0 < beta < 1, got {self.beta}")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x == 0):
            raise SingularPointError("singular potential evaluated at x = 0")
        return -self.U * np.abs(x) ** (-self.beta)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        return -np.sign(x) * self.U * np.abs(x) ** (1 - self.beta) / (1 - self.beta)

    def closed_turning_point(self, E):
        if not E < 0:
            raise PreconditionError(f"singular-well turning point needs E < 0, got {E}")
        return (-self.U / E) ** (1.0 / self.beta)

    def to_dict(self):
        return {"type": self.kind, "U": self.U, "beta": self.beta}


@dataclass(frozen=True)
class Harmonic:
    """Harmonic oscillator of angular frequency ``omega``; resolved to a
    :class:`PowerLaw` with ``U = m omega^2 / 2`` once the mass is known."""

    omega: float

    kind = "harmonic"

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError("harmonic potential needs omega > 0")

    def resolve(self, scales: PhysicalScales) -> PowerLaw:
        return PowerLaw(U=0.5 * scales.mass * self.omega**2, alpha=2.0)

    def to_dict(self):
        return {"type": self.kind, "omega": self.omega}


@dataclass(frozen=True)
class HardWall:
    """Infinite walls at ``+-half_width``, ``V = 0`` inside."""

    half_width: float = 1.0

    kind = "hard_wall"
    is_even = True
    singular_at_zero = False

    def __post_init__(self):
        if not self.half_width > 0:
            raise ConfigError("hard wall needs half_width > 0")

    @property
    def domain(self):
        return (-self.half_width, self.half_width)

    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def antiderivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def closed_turning_point(self, E):
        return self.half_width

    def to_dict(self):
        return {"type": self.kind, "half_width": self.half_width}


@dataclass(frozen=True)
class PiecewiseConstant:
    """``V = values[i]`` on ``[breakpoints[i], breakpoints[i+1])``."""

    breakpoints: tuple
    values: tuple

    kind = "piecewise"
    singular_at_zero = False

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.ndim != 1 or b.size < 2 or v.size != b.size - 1:
            raise ConfigError("piecewise profile needs n+1 breakpoints for n values")
        if np.any(np.diff(b) <= 0):
            raise ConfigError("breakpoints must be strictly ascending")
        object.__setattr__(self, "breakpoints", tuple(float(t) for t in b))
        object.__setattr__(self, "values", tuple(float(t) for t in v))

    @property
    def domain(self):
        return (self.breakpoints[0], self.breakpoints[-1])

    @property
    def is_even(self):
        b = np.asarray(self.breakpoints)
        return bool(np.allclose(b, -b[::-1]) and np.allclose(self.values, self.values[::-1]))

    def value(self, x):
        x = np.asarray(x, dtype=float)
        b = np.asarray(self.breakpoints)
        idx = np.clip(np.searchsorted(b, x, side="right") - 1, 0, len(self.values) - 1)
        return np.asarray(self.values)[idx]

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        b = np.asarray(self.breakpoints)
        cum = np.concatenate([[0.0], np.cumsum(np.diff(b) * np.asarray(self.values))])
        idx = np.clip(np.searchsorted(b, x, side="right") - 1, 0, len(self.values) - 1)
        prim = cum[idx] + np.asarray(self.values)[idx] * (x - b[idx])
        # shift so that the antiderivative vanishes at 0 (or at the left edge)
        x0 = min(max(0.0, b[0]), b[-1])
        i0 = min(max(np.searchsorted(b, x0, side="right") - 1, 0), len(self.values) - 1)
        return prim - (cum[i0] + self.values[i0] * (x0 - b[i0]))

    def closed_turning_point(self, E):
        return None

    def to_dict(self):
        return {"type": self.kind, "breakpoints": list(self.breakpoints), "values": list(self.values)}


@dataclass(frozen=True)
class Tabulated:
    """Linearly interpolated samples ``V(x_i) = V_i``."""

    x: tuple
    V: tuple

    kind = "tabulated"
    singular_at_zero = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        V = np.asarray(self.V, dtype=float)
        if x.ndim != 1 or x.size < 2 or V.shape != x.shape:
            raise ConfigError("tabulated profile needs matching x and V arrays of length >= 2")
        if np.any(np.diff(x) <= 0):
            raise ConfigError("tabulated grid must be strictly ascending")
        object.__setattr__(self, "x", tuple(float(t) for t in x))
        object.__setattr__(self, "V", tuple(float(t) for t in V))

    @property
    def domain(self):
        return (self.x[0], self.x[-1])

    @property
    def is_even(self):
        x = np.asarray(self.x)
        return bool(np.allclose(x, -x[::-1]) and np.allclose(self.V, self.V[::-1]))

    def value(self, x):
        return np.interp(x, self.x, self.V)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.asarray(self.x)
        Vs = np.asarray(self.V)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(xs) * (Vs[1:] + Vs[:-1]))])

        def prim(t):
            i = np.clip(np.searchsorted(xs, t, side="right") - 1, 0, xs.size - 2)
            d = t - xs[i]
            slope = (Vs[i + 1] - Vs[i]) / (xs[i + 1] - xs[i])
            return cum[i] + Vs[i] * d + 0.5 * slope * d * d

        x0 = min(max(0.0, xs[0]), xs[-1])
        return prim(x) - prim(np.float64(x0))

    def closed_turning_point(self, E):
        return None

    def to_dict(self):
        return {"type": self.kind, "x": list(self.x), "V": list(self.V)}


@dataclass(frozen=True)
class _Negated:
    """``-profile(x)``; turns a permittivity into an effective potential."""

    base: Any

    kind = "negated"
    singular_at_zero = False

    @property
    def domain(self):
        return self.base.domain

    @property
    def is_even(self):
        return self.base.is_even

    def value(self, x):
        return -self.base.value(x)

    def antiderivative(self, x):
        return -self.base.antiderivative(x)

    def closed_turning_point(self, E):
        return None


@dataclass(frozen=True)
class OpticalSpec:
    """Dielectric slab: ``k^2(x) = (omega / c)^2 (epsilon(x) - N)``.

    ``epsilon`` is any profile object (typically :class:`PiecewiseConstant`).
    The mapping onto the Schroedinger form is ``V = -epsilon`` and ``E = -N``.
    """

    omega: float
    epsilon: Any
    N: float = 0.0
    c: float = 299_792_458.0

    def __post_init__(self):
        if not (self.omega > 0 and self.c > 0):
            raise ConfigError("omega and c must be positive")

    @property
    def energy(self) -> float:
        return -self.N

    def to_ksq(self) -> "KsqProfile":
        return KsqProfile(_Negated(self.epsilon), prefactor=(self.omega / self.c) ** 2)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TurningPoints:
    """Turning points ``left < right``; ``xi`` is the right one."""

    xi: float
    left: float

    @property
    def right(self):
        return self.xi


@dataclass(frozen=True)
class KsqProfile:
    """``k^2(x; E) = prefactor * (E - V(x))``.

    ``prefactor`` defaults to ``2 m / hbar^2`` from ``scales``.
    """

    potential: Any
    scales: PhysicalScales = field(default=NORMALIZED)
    prefactor: float | None = None

    def __post_init__(self):
        if isinstance(self.potential, Harmonic):
            object.__setattr__(self, "potential", self.potential.resolve(self.scales))
        if self.prefactor is None:
            object.__setattr__(self, "prefactor", self.scales.ksq_factor)
        if not self.prefactor > 0:
            raise ConfigError("k^2 prefactor must be positive")

    @property
    def is_even(self) -> bool:
        return bool(self.potential.is_even)

    @property
    def domain(self):
        return self.potential.domain

    @property
    def singular_at_zero(self) -> bool:
        return bool(self.potential.singular_at_zero)

    def scaled(self, factor: float) -> "KsqProfile":
        """Same profile with ``k^2`` multiplied by ``factor``."""
        return replace(self, prefactor=self.prefactor * factor)

    def _check_domain(self, x):
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        tol = 1e-12 * max(1.0, abs(lo) if math.isfinite(lo) else 1.0, abs(hi) if math.isfinite(hi) else 1.0)
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            raise DomainError(f"x outside profile domain [{lo}, {hi}]")

    def ksq(self, E, x):
        """Vectorized ``k^2``; no domain check."""
        return self.prefactor * (E - self.potential.value(x))

    def __call__(self, E, x):
        return ksq_at(self, E, x)


def ksq_at(profile: KsqProfile, E: float, x):
    """``k^2(x) = prefactor * (E - V(x))``; negative in forbidden regions."""
    profile._check_domain(x)
    if profile.singular_at_zero and np.any(np.asarray(x) == 0):
        raise SingularPointError("k^2 is singular at x = 0")
    out = profile.ksq(E, x)
    return float(out) if np.ndim(out) == 0 else out


def _bisect_sign_change(fn, a, b, rtol=TURNING_RTOL):
    fa = fn(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        if abs(b - a) <= rtol * max(abs(m), 1e-300):
            break
        fm = fn(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _scan_turning_point(profile, E, start, stop):
    """First sign change of k^2 from + to - walking from start to stop."""
    pot = profile.potential
    if isinstance(pot, Tabulated):
        nodes = np.asarray(pot.x)
    elif isinstance(pot, PiecewiseConstant):
        nodes = np.asarray(pot.breakpoints)
    else:
        nodes = np.empty(0)
    lo, hi = sorted((start, stop))
    inner = nodes[(nodes > lo) & (nodes < hi)]
    pts = np.unique(np.concatenate([[start, stop], inner, np.linspace(start, stop, 257)]))
    if stop < start:
        pts = pts[::-1]
    vals = profile.ksq(E, pts)
    if vals[0] <= 0:
        raise NoTurningPointError(f"k^2 <= 0 at the scan origin x = {start} for E = {E}")
    neg = np.nonzero(vals <= 0)[0]
    if neg.size == 0:
        raise NoTurningPointError(f"k^2 has no sign change between {start} and {stop} at E = {E}")
    j = neg[0]
    # for piecewise-constant profiles this converges onto the jump
    return float(_bisect_sign_change(lambda t: float(profile.ksq(E, t)), pts[j - 1], pts[j]))


def turning_point(profile: KsqProfile, E: float) -> TurningPoints:
    """Classical turning points at energy ``E``.

    Closed forms for power-law, singular and hard-wall profiles; bracketing
    plus bisection (relative tolerance 1e-12) otherwise.  Scans start at
    ``x = 0`` (or the middle of the domain when 0 lies outside it).
    """
    closed = profile.potential.closed_turning_point(E)
    if closed is not None:
        return TurningPoints(xi=float(closed), left=-float(closed))
    lo, hi = profile.domain
    centre = 0.0 if lo < 0 < hi else 0.5 * (lo + hi)
    right = _scan_turning_point(profile, E, centre, hi)
    if profile.is_even and centre == 0.0:
        left = -right
    else:
        left = _scan_turning_point(profile, E, centre, lo)
    return TurningPoints(xi=right, left=left)


def _quad(fn, a, b, **kw):
    val, err, info = integrate.quad(
        fn, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400, full_output=1, **kw
    )[:3]
    if err > 1e3 * QUAD_TOL * max(1.0, abs(val)):
        raise IntegrationError(f"quadrature on [{a}, {b}] did not converge (error estimate {err:.3g})")
    return val


def integrate_ksq(profile: KsqProfile, E: float, a: float, b: float, method: str = "analytic") -> float:
    """``int_a^b k^2(t) dt``.

    ``method="analytic"`` uses the potential's exact antiderivative (closed
    forms for power laws; exact per-segment sums for piecewise and tabulated
    profiles).  ``method="quad"`` uses adaptive quadrature, splitting at the
    singular point and at profile breakpoints.
    """
    if a > b:
        raise PreconditionError(f"integrate_ksq needs a <= b, got [{a}, {b}]")
    profile._check_domain([a, b])
    if a == b:
        return 0.0
    pot = profile.potential
    if method == "analytic":
        W = pot.antiderivative(np.array([a, b]))
        return float(profile.prefactor * (E * (b - a) - (W[1] - W[0])))
    if method != "quad":
        raise ConfigError(f"unknown integration method {method!r}")
    cuts = [a, b]
    if profile.singular_at_zero and a < 0 < b:
        cuts.append(0.0)
    for attr in ("breakpoints", "x"):
        nodes = getattr(pot, attr, None)
        if nodes is not None:
            cuts.extend(t for t in nodes if a < t < b)
    cuts = sorted(set(cuts))
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _quad(lambda t: float(profile.ksq(E, t)), lo, hi)
    return total


def _k_on_interval(profile, E, a, b, absolute=False):
    """int_a^b sqrt(k^2) through t = a + (b - a)(1 - cos theta) / 2.

    The map turns sqrt-type endpoint zeros and |t|^(-1/4)-type endpoint
    growth into integrands that vanish smoothly at theta = 0, pi.
    ``absolute=True`` integrates sqrt(|k^2|) instead.
    """
    half = 0.5 * (b - a)

    def integrand(theta):
        t = a + half * (1.0 - math.cos(theta))
        if t == 0.0 and profile.singular_at_zero:
            return 0.0
        q = float(profile.ksq(E, t))
        q = abs(q) if absolute else max(q, 0.0)
        return math.sqrt(q) * half * math.sin(theta)

    return _quad(integrand, 0.0, math.pi)


def integrate_k(profile: KsqProfile, E: float, a: float, b: float) -> float:
    """``int_a^b k(t) dt`` with ``k = sqrt(k^2)``.

    Tolerates square-root zeros of k^2 at the endpoints (turning points) and
    the integrable ``|x|^(-beta/2)`` growth of k at the singular point.
    Raises :class:`ForbiddenRegionError` if ``k^2 < 0`` inside ``(a, b)``.
    """
    if a > b:
        raise PreconditionError(f"integrate_k needs a <= b, got [{a}, {b}]")
    profile._check_domain([a, b])
    if a == b:
        return 0.0
    pot = profile.potential
    cuts = {a, b}
    if profile.singular_at_zero and a < 0 < b:
        cuts.add(0.0)
    for attr in ("breakpoints", "x"):
        nodes = getattr(pot, attr, None)
        if nodes is not None:
            cuts.update(t for t in nodes if a < t < b)
    cuts = sorted(cuts)

    # interior sign check, away from the endpoints where turning points may sit
    span = b - a
    probe = np.linspace(a, b, 203)[1:-1]
    probe = probe[(probe - a > 1e-9 * span) & (b - probe > 1e-9 * span)]
    if profile.singular_at_zero:
        probe = probe[probe != 0]
    q = profile.ksq(E, probe)
    scale = profile.prefactor * max(1.0, abs(E))
    if np.any(q < -1e-12 * scale):
        bad = probe[np.argmin(q)]
        raise ForbiddenRegionError(f"k^2 < 0 inside [{a}, {b}] (e.g. at x = {bad:.6g}) for E = {E}")

    if isinstance(pot, (PiecewiseConstant, HardWall)):
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            total += math.sqrt(max(float(profile.ksq(E, 0.5 * (lo + hi))), 0.0)) * (hi - lo)
        return total
    return float(sum(_k_on_interval(profile, E, lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:])))


# --------------------------------------------------------------------------
# JSON ingestion

_FIELDS = {
    "power_law": (PowerLaw, {"U": "U", "alpha": "alpha"}),
    "singular": (SingularPowerLaw, {"U": "U", "beta": "beta"}),
    "harmonic": (Harmonic, {"omega": "omega", "Omega": "omega"}),
    "piecewise": (PiecewiseConstant, {"breakpoints": "breakpoints", "values": "values"}),
    "tabulated": (Tabulated, {"x": "x", "V": "V"}),
    "hard_wall": (HardWall, {"half_width": "half_width"}),
}


def potential_from_dict(doc: Mapping[str, Any]):
    """Build ``(potential, scales)`` from a JSON-style mapping.

    Unknown keys are rejected.
    """
    doc = dict(doc)
    kind = doc.pop("type", None)
    if kind not in _FIELDS:
        raise ConfigError(f"unknown potential type {kind!r}; expected one of {sorted(_FIELDS)}")
    scales_doc = doc.pop("scales", None)
    if scales_doc is None:
        scales = NORMALIZED
    else:
        unknown = set(scales_doc) - {"mass", "hbar"}
        if unknown:
            raise ConfigError(f"unknown scales fields {sorted(unknown)}")
        scales = PhysicalScales(**{k: float(v) for k, v in scales_doc.items()})
    cls, names = _FIELDS[kind]
    unknown = set(doc) - set(names)
    if unknown:
        raise ConfigError(f"unknown fields for {kind}: {sorted(unknown)}")
    kwargs = {names[k]: v for k, v in doc.items()}
    try:
        pot = cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad fields for {kind}: {exc}") from None
    return pot, scales


def load_potential(path) -> KsqProfile:
    """Read a potential description from a JSON file."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read potential spec {path}: {exc}") from None
    pot, scales = potential_from_dict(doc)
    return KsqProfile(pot, scales)
