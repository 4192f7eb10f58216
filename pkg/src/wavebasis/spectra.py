"""Bound-state spectra: closed forms and root-found quantization conditions."""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import ForbiddenRegionError, NoRootError, NoTurningPointError, PreconditionError
from .profiles import (
    NORMALIZED,
    HardWall,
    KsqProfile,
    PhysicalScales,
    PowerLaw,
    SingularPowerLaw,
    integrate_k,
    integrate_ksq,
    turning_point,
)

__all__ = [
    "RuleKind",
    "QuantizationRule",
    "EnergyLevel",
    "EnergySpectrum",
    "SpectrumComparison",
    "power_law_energy",
    "wkb_quarkonium_energy",
    "harmonic_exact_energy",
    "infinite_well_energy",
    "singular_energy",
    "quantization_phase",
    "solve_quantization",
    "compare_spectra",
]

log = logging.getLogger(__name__)

EXPANSION_BUDGET = 60
ROOT_RTOL = 1e-12


class RuleKind(enum.Enum):
    NEW = "new"
    WKB = "wkb"


@dataclass(frozen=True)
class QuantizationRule:
    """Quantization condition ``Phi(E) = pi (n + phase_shift)``.

    ``phase_shift=None`` picks 0 for hard walls and 1/2 otherwise.
    """

    kind: RuleKind = RuleKind.NEW
    phase_shift: float | None = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", RuleKind(self.kind))
        if self.phase_shift not in (None, 0, 0.5):
            raise PreconditionError(f"phase_shift must be 0 or 1/2, got {self.phase_shift}")

    def shift_for(self, profile: KsqProfile) -> float:
        if self.phase_shift is not None:
            return float(self.phase_shift)
        return 0.0 if isinstance(profile.potential, HardWall) else 0.5


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    E: float
    method: str


@dataclass(frozen=True)
class EnergySpectrum:
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(sorted(self.levels, key=lambda lv: lv.n)))

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def energy(self, n: int) -> float:
        for lv in self.levels:
            if lv.n == n:
                return lv.E
        raise KeyError(n)

    @property
    def ns(self):
        return [lv.n for lv in self.levels]


@dataclass(frozen=True)
class SpectrumComparison:
    a: EnergySpectrum
    b: EnergySpectrum
    rel_errors: dict = field(default_factory=dict)

    @property
    def max_error(self) -> float:
        return max(self.rel_errors.values()) if self.rel_errors else 0.0


# --------------------------------------------------------------------------
# closed forms


def _check_n(n, minimum=0):
    if int(n) != n or n < minimum:
        raise PreconditionError(f"state index must be an integer >= {minimum}, got {n}")


def power_law_energy(U: float, alpha: float, n: int, scales: PhysicalScales = NORMALIZED) -> float:
    """Closed-form level of ``V = U |x|^alpha`` from the new-basis quantization."""
    if not (U > 0 and alpha > 0):
        raise PreconditionError("power_law_energy needs U > 0 and alpha > 0")
    _check_n(n)
    m, hbar = scales.mass, scales.hbar
    base = math.pi**2 * hbar**2 / (8 * m) * (1 + 1 / alpha) * U ** (2 / alpha)
    return base ** (alpha / (alpha + 2)) * (n + 0.5) ** (2 * alpha / (alpha + 2))


def wkb_quarkonium_energy(U: float, n: int, scales: PhysicalScales = NORMALIZED) -> float:
    """WKB level of the linear potential ``U |x|``."""
    _check_n(n)
    m, hbar = scales.mass, scales.hbar
    return (9 * math.pi**2 * hbar**2 * U**2 / (32 * m)) ** (1 / 3) * (n + 0.5) ** (2 / 3)


def harmonic_exact_energy(omega: float, n: int, scales: PhysicalScales = NORMALIZED) -> float:
    """``hbar omega (n + 1/2)``."""
    _check_n(n)
    return scales.hbar * omega * (n + 0.5)


def infinite_well_energy(n: int, scales: PhysicalScales = NORMALIZED, half_width: float = 1.0) -> float:
    """Particle in a box of width ``2 half_width``: ``pi^2 hbar^2 n^2 / (8 m a^2)``."""
    _check_n(n, minimum=1)
    return math.pi**2 * scales.hbar**2 * n**2 / (8 * scales.mass * half_width**2)


def singular_energy(U: float, beta: float, n: int, scales: PhysicalScales = NORMALIZED) -> float:
    """Closed-form level of ``V = -U |x|^-beta``; bounded only for ``0 < beta < 1``."""
    if not 0 < beta < 1:
        raise PreconditionError(f"the singular well has a ground state only for 0 < beta < 1, got {beta}")
    if not U > 0:
        raise PreconditionError("singular_energy needs U > 0")
    _check_n(n)
    m, hbar = scales.mass, scales.hbar
    base = 8 * beta * U ** (2 / beta) * m / (math.pi**2 * hbar**2 * (1 - beta))
    return -(base ** (beta / (2 - beta))) * (n + 0.5) ** (-2 * beta / (2 - beta))


# --------------------------------------------------------------------------
# quantization by root finding


def quantization_phase(profile: KsqProfile, rule: QuantizationRule, E: float) -> float:
    """``Phi(E)``: ``sqrt(2 xi int k^2)`` (new bases) or ``int k`` (WKB) over ``[-xi, xi]``."""
    tp = turning_point(profile, E)
    a, b = tp.left, tp.right
    if rule.kind is RuleKind.NEW:
        acc = integrate_ksq(profile, E, a, b)
        return math.sqrt(max((b - a) * acc, 0.0))
    return integrate_k(profile, E, a, b)


def _initial_guess(profile: KsqProfile, n: int, shift: float) -> float:
    pot, sc = profile.potential, profile.scales
    if isinstance(pot, PowerLaw):
        return power_law_energy(pot.U, pot.alpha, n, sc)
    if isinstance(pot, SingularPowerLaw):
        return singular_energy(pot.U, pot.beta, n, sc)
    if isinstance(pot, HardWall):
        return infinite_well_energy(max(n, 1), sc, pot.half_width)
    lo, hi = profile.domain
    x0 = 0.5 * (hi if math.isfinite(hi) else 1.0)
    return float(pot.value(x0))


def _bracket(F, guess, multiplicative):
    """Grow [lo, hi] around ``guess`` until F(lo) < 0 < F(hi).

    Multiplicative growth (factor 2) keeps the sign of the energy, as needed
    for power laws (E > 0) and the singular well (E < 0).
    """
    lo = hi = guess
    step = max(abs(guess), 1e-3)
    for _ in range(EXPANSION_BUDGET):
        Flo, Fhi = F(lo), F(hi)
        if Flo < 0 < Fhi:
            return lo, hi
        if multiplicative:
            if Flo >= 0:
                lo = lo / 2 if guess > 0 else lo * 2
            if Fhi <= 0:
                hi = hi * 2 if guess > 0 else hi / 2
        else:
            if Flo >= 0:
                lo -= step
            if Fhi <= 0:
                hi += step
            step *= 2
    raise NoRootError(f"no bracket for the quantization root after {EXPANSION_BUDGET} expansions")


def solve_quantization(profile: KsqProfile, rule: QuantizationRule, n: int) -> EnergyLevel:
    """Energy ``E_n`` solving ``Phi(E) = pi (n + phase_shift)``.

    The bracket grows geometrically from a closed-form or potential-based
    guess; the root is polished by Brent's method to ``|dE/E| <= 1e-12``.
    """
    _check_n(n)
    if not profile.is_even:
        raise PreconditionError("solve_quantization needs an even confining profile")
    shift = rule.shift_for(profile)
    if n == 0 and shift == 0:
        raise PreconditionError("n = 0 with zero phase shift has only the trivial root E = 0")
    target = math.pi * (n + shift)

    def F(E):
        try:
            return quantization_phase(profile, rule, E) - target
        except (PreconditionError, ForbiddenRegionError):
            # energy below the well: no classically allowed region
            return -target
        except NoTurningPointError:
            return math.inf

    guess = _initial_guess(profile, n, shift)
    multiplicative = isinstance(profile.potential, (PowerLaw, SingularPowerLaw, HardWall))
    lo, hi = _bracket(F, guess, multiplicative)

    probe = np.linspace(lo, hi, 17)
    vals = np.array([F(e) for e in probe])
    changes = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
    roots = [
        optimize.brentq(F, probe[i], probe[i + 1], xtol=1e-300, rtol=ROOT_RTOL, maxiter=500) for i in changes
    ]
    if len(roots) > 1:
        warnings.warn(f"quantization phase is not monotone; roots in bracket: {roots}", RuntimeWarning, stacklevel=2)
    log.debug("solve_quantization n=%d rule=%s -> %s", n, rule.kind.value, roots)
    return EnergyLevel(n=n, E=float(roots[0]), method="quantization-root")


def compare_spectra(a: EnergySpectrum, b: EnergySpectrum) -> SpectrumComparison:
    """Relative errors ``|E_a - E_b| / |E_b|`` on the common ``n`` range."""
    common = sorted(set(a.ns) & set(b.ns))
    if not common:
        raise PreconditionError("spectra share no state index")
    errs = {n: abs(a.energy(n) - b.energy(n)) / abs(b.energy(n)) for n in common}
    return SpectrumComparison(a, b, errs)
