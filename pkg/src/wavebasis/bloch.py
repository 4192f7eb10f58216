"""Bloch dispersion of periodic media.

Three dispersion relations for a cell of period ``L``:

* ``kappa_new``: ``kappa^2 = (1/L) int_0^L k^2``, the cell average,
* ``kappa_wkb``: ``kappa = (1/L) int_0^L k``,
* ``kappa_exact``: ``cos(kappa L) = tr(M) / 2`` from the one-period monodromy.

In the long-wavelength limit the exact relation tends to the cell average of
``k^2`` (homogenization); the WKB mean of ``k`` does not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dtmm import ComplexCoefficient, TransferMatrix4, piecewise_propagate
from .errors import ConfigError, PreconditionError
from .profiles import KsqProfile, PiecewiseConstant, integrate_k, integrate_ksq

__all__ = [
    "PeriodicProfile",
    "DispersionPoint",
    "kappa_new",
    "kappa_wkb",
    "kappa_exact",
    "monodromy",
    "homogenization_error",
]

DEFAULT_SEGMENTS = 1024


@dataclass(frozen=True)
class PeriodicProfile:
    """One period of a periodic medium.

    The cell is ``cell`` over its (finite) domain at energy ``E``; the period
    is the domain length.  ``drive`` multiplies ``k``, so ``k^2`` scales by
    ``drive^2`` (frequency for optical cells).
    """

    cell: KsqProfile
    E: float = 0.0
    drive: float = 1.0

    def __post_init__(self):
        lo, hi = self.cell.domain
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigError("a periodic cell needs a finite domain")
        if not self.drive > 0:
            raise PreconditionError("drive must be positive")

    @classmethod
    def two_layer(cls, k1: float, a: float, k2: float, b: float, drive: float = 1.0) -> "PeriodicProfile":
        """Layers with wavenumbers ``k1`` (thickness ``a``) and ``k2`` (thickness ``b``)."""
        if not (a > 0 and b > 0):
            raise ConfigError("layer thicknesses must be positive")
        pot = PiecewiseConstant((0.0, a, a + b), (-(k1**2), -(k2**2)))
        return cls(KsqProfile(pot, prefactor=1.0), E=0.0, drive=drive)

    @classmethod
    def homogeneous(cls, ksq: float, L: float = 1.0) -> "PeriodicProfile":
        return cls(KsqProfile(PiecewiseConstant((0.0, L), (-ksq,)), prefactor=1.0), E=0.0)

    @property
    def L(self) -> float:
        lo, hi = self.cell.domain
        return hi - lo

    @property
    def profile(self) -> KsqProfile:
        """The cell with the drive folded into the prefactor."""
        return self.cell.scaled(self.drive**2) if self.drive != 1.0 else self.cell

    def with_drive(self, drive: float) -> "PeriodicProfile":
        return PeriodicProfile(self.cell, self.E, drive)

    def mean_ksq(self) -> float:
        lo, hi = self.cell.domain
        return integrate_ksq(self.profile, self.E, lo, hi) / self.L


@dataclass(frozen=True)
class DispersionPoint:
    drive: float
    kappa_re: float
    kappa_im: float
    method: str

    @property
    def kappa(self) -> complex:
        return complex(self.kappa_re, self.kappa_im)

    @property
    def in_gap(self) -> bool:
        return self.kappa_im != 0.0


def kappa_new(profile: PeriodicProfile) -> DispersionPoint:
    """``kappa = sqrt(<k^2>)``; a negative mean gives an imaginary ``kappa``."""
    mean = profile.mean_ksq()
    root = math.sqrt(abs(mean))
    if mean >= 0:
        return DispersionPoint(profile.drive, root, 0.0, "new")
    return DispersionPoint(profile.drive, 0.0, root, "new")


def kappa_wkb(profile: PeriodicProfile) -> DispersionPoint:
    """``kappa = <k>``; raises :class:`ForbiddenRegionError` if ``k^2 < 0`` in the cell."""
    lo, hi = profile.cell.domain
    return DispersionPoint(profile.drive, integrate_k(profile.profile, profile.E, lo, hi) / profile.L, 0.0, "wkb")


def monodromy(profile: PeriodicProfile, n_segments: int = DEFAULT_SEGMENTS, align: bool = True) -> TransferMatrix4:
    """One-period transfer matrix; ``align`` places segment edges on layer interfaces."""
    lo, hi = profile.cell.domain
    f = ComplexCoefficient.from_profile(profile.profile, profile.E)
    bps = getattr(profile.cell.potential, "breakpoints", None) if align else None
    return piecewise_propagate(f, lo, hi, n_segments, breakpoints=bps)


def kappa_exact(profile: PeriodicProfile, n_segments: int = DEFAULT_SEGMENTS, align: bool = True) -> DispersionPoint:
    """Bloch number from ``tr M``, reported in the first zone ``[0, pi/L]``.

    In a gap, ``kappa_im = arccosh(|tr M| / 2) / L`` and ``kappa_re`` is 0
    (``tr M > 2``) or ``pi / L`` (``tr M < -2``).
    """
    M = monodromy(profile, n_segments, align)
    half_tr = 0.5 * M.trace.real
    L = profile.L
    if abs(half_tr) <= 1.0:
        return DispersionPoint(profile.drive, math.acos(half_tr) / L, 0.0, "exact")
    re = 0.0 if half_tr > 0 else math.pi / L
    return DispersionPoint(profile.drive, re, math.acosh(abs(half_tr)) / L, "exact")


def homogenization_error(profile: PeriodicProfile, drive_scale: float, n_segments: int = DEFAULT_SEGMENTS):
    """Relative errors ``(err_new, err_wkb)`` against ``kappa_exact`` at ``k -> drive_scale k``."""
    p = profile.with_drive(profile.drive * drive_scale)
    exact = kappa_exact(p, n_segments).kappa
    if exact == 0:
        raise PreconditionError("exact Bloch number vanishes; relative error undefined")
    err_new = abs(kappa_new(p).kappa - exact) / abs(exact)
    err_wkb = abs(kappa_wkb(p).kappa - exact) / abs(exact)
    return err_new, err_wkb
