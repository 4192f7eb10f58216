"""Independent numerical ground truth.

* :func:`numerov_eigensolve` -- parity-reduced Numerov shooting for even
  potentials: node counting brackets the level, a matched two-sided Wronskian
  pins it down.
* :func:`integrate_ivp` -- fixed-step RK4 for ``u'' = -k^2 u``.
* :func:`two_layer_cos_kl` -- closed-form Bloch trace of a two-layer cell.

For the singular well ``-U |x|^-beta`` the region next to the origin is
covered by the exact Frobenius series of the regular solution; Numerov starts
where that series has converged, so the ``x^(2-beta)`` cusp never enters a
finite-difference stencil.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.interpolate import CubicSpline

from .errors import AccuracyError, NoRootError, PreconditionError, SingularPointError, TruncationError
from .kernels import chain_states, count_sign_changes, numerov_steps
from .profiles import (
    NORMALIZED,
    HardWall,
    KsqProfile,
    PhysicalScales,
    PowerLaw,
    SingularPowerLaw,
    turning_point,
)

__all__ = [
    "Grid",
    "OracleEigenresult",
    "frobenius_singular",
    "numerov_eigensolve",
    "integrate_ivp",
    "two_layer_cos_kl",
]

log = logging.getLogger(__name__)

DECAY_TOL = 1e-6
BRACKET_BUDGET = 60
_N_INNER = 48


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n_points`` nodes spanning ``[x_min, x_max]``."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 64:
            raise PreconditionError("a grid needs at least 64 points")
        if not self.x_max > self.x_min:
            raise PreconditionError("grid needs x_max > x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True, eq=False)
class OracleEigenresult:
    """Bound state on the half line ``x > 0``.

    ``wavefunction`` is normalized to unit norm on the full line; ``weights``
    are quadrature weights for the half-line samples ``x``.
    """

    n: int
    E: float
    x: np.ndarray
    wavefunction: np.ndarray
    weights: np.ndarray
    node_count: int
    parity: str
    grid: Grid

    def full(self):
        """Samples mirrored onto the full line, ascending in ``x``."""
        s = 1.0 if self.parity == "even" else -1.0
        return (
            np.concatenate([-self.x[::-1], self.x]),
            np.concatenate([s * self.wavefunction[::-1], self.wavefunction]),
        )

    def inner(self, other: "OracleEigenresult") -> float:
        """Full-line inner product; zero by symmetry for opposite parities."""
        if self.parity != other.parity:
            return 0.0
        if self.x.shape == other.x.shape and np.allclose(self.x, other.x):
            v = other.wavefunction
        else:
            # different grids: interpolate, treating the other state as zero past its grid
            xf, uf = other.full()
            v = np.where(self.x <= xf[-1], CubicSpline(xf, uf)(np.minimum(self.x, xf[-1])), 0.0)
        return float(2.0 * np.sum(self.weights * self.wavefunction * v))

    def trace(self, x):
        """Wavefunction at arbitrary ``x`` scaled to ``u(0) = 1`` (even) or ``u'(0) = 1`` (odd)."""
        xf, uf = self.full()
        spline = CubicSpline(xf, uf)
        ref = spline(0.0) if self.parity == "even" else spline(0.0, 1)
        return spline(np.asarray(x, dtype=float)) / ref


def frobenius_singular(cE, cU, beta, parity, x, order=60):
    """Regular solution of ``u'' = -(cE + cU |x|^-beta) u`` near ``x = 0``.

    Returns ``(u, u')`` normalized to ``u(0) = 1`` (even) or ``u'(0) = 1`` (odd).
    The series runs over exponents ``base + i (2 - beta) + 2 j``.
    """
    base = 0 if parity == 0 else 1
    a = np.zeros((order, order))
    a[0, 0] = 1.0
    i_idx, j_idx = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
    P = base + i_idx * (2.0 - beta) + 2.0 * j_idx
    for s in range(1, 2 * order - 1):
        for i in range(max(0, s - order + 1), min(s, order - 1) + 1):
            j = s - i
            acc = 0.0
            if j >= 1:
                acc += cE * a[i, j - 1]
            if i >= 1:
                acc += cU * a[i - 1, j]
            p = P[i, j]
            a[i, j] = -acc / (p * (p - 1.0))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp = x[:, None, None] ** P[None]
    u = np.sum(a[None] * xp, axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        du = np.sum(np.where(P[None] > 0, a[None] * P[None] * xp / x[:, None, None], 0.0), axis=(1, 2))
    return u, du


# --------------------------------------------------------------------------


def _estimate_energy(profile: KsqProfile, n: int) -> float:
    from .spectra import infinite_well_energy, power_law_energy, singular_energy

    pot, sc = profile.potential, profile.scales
    if isinstance(pot, PowerLaw):
        return power_law_energy(pot.U, pot.alpha, n, sc)
    if isinstance(pot, SingularPowerLaw):
        return singular_energy(pot.U, pot.beta, n, sc)
    if isinstance(pot, HardWall):
        return infinite_well_energy(n + 1, sc, pot.half_width)
    lo, hi = profile.domain
    return float(pot.value(0.5 * hi)) if math.isfinite(hi) else 1.0


class _HalfLineShooter:
    """Numerov sweeps on ``(0, x_max]`` for one parity."""

    def __init__(self, profile: KsqProfile, x_max: float, n_points: int, parity: int):
        self.profile = profile
        self.parity = parity
        self.singular = profile.singular_at_zero
        pot = profile.potential
        if self.singular:
            c = profile.prefactor
            self.cU = c * pot.U
            self.beta = pot.beta
            # the series converges quickly once cU x^(2-beta) <= 1/2
            self.x_s = min(0.5 * (0.5 / self.cU) ** (1.0 / (2.0 - self.beta)), 0.05 * x_max)
            self.x = np.linspace(self.x_s, x_max, n_points)
            self.h = self.x[1] - self.x[0]
            gl, glw = np.polynomial.legendre.leggauss(_N_INNER)
            self.x_inner = 0.5 * self.x_s * (gl + 1.0)
            self.w_inner = 0.5 * self.x_s * glw
        else:
            self.h = x_max / (n_points - 0.5)
            self.x = self.h / 2 + self.h * np.arange(n_points)
            self.x_inner = np.empty(0)
            self.w_inner = np.empty(0)
        self.n_points = n_points
        self.x_max = x_max

    def _f(self, E):
        return self.profile.ksq(E, self.x)

    def outward(self, E):
        f = self._f(E)
        h = self.h
        if self.singular:
            cE = self.profile.prefactor * E
            u01, _ = frobenius_singular(cE, self.cU, self.beta, self.parity, self.x[:2])
            states = chain_states(numerov_steps(f, h), (u01[1], u01[0]))
            return np.concatenate([[u01[0]], states[:, 0]])
        f_ext = np.concatenate([[f[0]], f])
        ghost = 1.0 if self.parity == 0 else -1.0
        states = chain_states(numerov_steps(f_ext, h), (1.0, ghost))
        return states[:, 0]

    def inward(self, E):
        f = self._f(E)[::-1]
        f_ext = np.concatenate([f, [f[-1]]])
        states = chain_states(numerov_steps(f_ext[: f.size], self.h), (1.0, 0.0))
        u = np.concatenate([[0.0], states[:, 0]])
        return u[::-1]

    def inner_values(self, E):
        if not self.singular:
            return np.empty(0)
        return frobenius_singular(self.profile.prefactor * E, self.cU, self.beta, self.parity, self.x_inner)[0]

    def nodes(self, E):
        u = self.outward(E)
        return count_sign_changes(np.concatenate([self.inner_values(E), u]))

    def match_index(self, E):
        try:
            xi = turning_point(self.profile, E).xi
        except Exception:
            return self.n_points // 2
        m = int(np.searchsorted(self.x, xi))
        return min(max(m, 2), self.n_points - 3)

    def mismatch(self, E):
        uo = self.outward(E)
        m = self.match_index(E)
        if m >= self.n_points - 3:
            return uo[-1] / np.max(np.abs(uo))
        ui = self.inward(E)
        no = np.max(np.abs(uo[: m + 2]))
        ni = np.max(np.abs(ui[m:]))
        return (uo[m] * ui[m + 1] - uo[m + 1] * ui[m]) / (no * ni)


def _solve_level(shooter: _HalfLineShooter, j: int, E_est: float, rtol: float):
    scale = max(abs(E_est), 1e-6)
    lo = hi = E_est
    step = scale
    for _ in range(BRACKET_BUDGET):
        if shooter.nodes(lo) <= j:
            break
        lo -= step
        step *= 2
    else:
        raise NoRootError(f"no lower bracket for level {j} of this parity")
    step = scale
    for _ in range(BRACKET_BUDGET):
        if shooter.nodes(hi) >= j + 1:
            break
        hi += step
        step *= 2
    else:
        raise NoRootError(f"no upper bracket for level {j} of this parity")
    # shrink by node counting until exactly one level is enclosed
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        nm = shooter.nodes(mid)
        if nm <= j:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-6 * max(abs(lo), abs(hi), 1e-12) and shooter.nodes(hi) == j + 1:
            break
    Wlo, Whi = shooter.mismatch(lo), shooter.mismatch(hi)
    if Wlo == 0:
        return lo
    if Whi == 0:
        return hi
    if np.sign(Wlo) == np.sign(Whi):
        raise NoRootError("matching function does not change sign inside the node bracket")
    return optimize.brentq(shooter.mismatch, lo, hi, xtol=1e-300, rtol=rtol, maxiter=500)


def _eigenfunction(shooter: _HalfLineShooter, E: float):
    uo = shooter.outward(E)
    m = shooter.match_index(E)
    if m >= shooter.n_points - 3:
        u = uo
    else:
        ui = shooter.inward(E)
        k = m if abs(ui[m]) >= abs(ui[m + 1]) else m + 1
        u = np.concatenate([uo[:k], ui[k:] * (uo[k] / ui[k])])
    inner = shooter.inner_values(E)
    x = np.concatenate([shooter.x_inner, shooter.x])
    u = np.concatenate([inner, u])
    if shooter.singular:
        w = np.full(shooter.n_points, shooter.h)
        w[0] = w[-1] = 0.5 * shooter.h
        weights = np.concatenate([shooter.w_inner, w])
    else:
        weights = np.full(shooter.n_points, shooter.h)
    return x, u, weights


def numerov_eigensolve(
    V,
    scales: PhysicalScales = NORMALIZED,
    grid: Grid | None = None,
    n: int = 0,
    *,
    points_per_xi: int = 2000,
    max_doublings: int = 8,
    rtol: float = 1e-12,
) -> OracleEigenresult:
    """``n``-th bound state of an even potential by Numerov shooting.

    Parameters
    ----------
    V : potential object or KsqProfile
        Even confining potential, the singular well, or a hard wall.
    grid : Grid, optional
        Half-line grid ``[0, x_max]`` with ``n_points`` nodes.  By default
        ``x_max = 3 xi`` at a closed-form energy estimate, doubled until the
        eigenfunction has decayed by ``1e-6`` over the outer tenth of the grid;
        the spacing is ``xi / points_per_xi``.
    n : int
        State index on the full line; parity is ``n % 2``.
    """
    profile = V if isinstance(V, KsqProfile) else KsqProfile(V, scales)
    if int(n) != n or n < 0:
        raise PreconditionError(f"state index must be a non-negative integer, got {n}")
    if not profile.is_even:
        raise PreconditionError("numerov_eigensolve needs an even potential")
    parity, j = n % 2, n // 2
    E_est = _estimate_energy(profile, n)
    hard = isinstance(profile.potential, HardWall)
    if hard:
        xi = profile.potential.half_width
        x_max = xi
    else:
        xi = turning_point(profile, E_est).xi
        x_max = 3.0 * xi
    if grid is not None:
        if grid.x_min != 0:
            raise PreconditionError("the parity-reduced oracle needs a grid starting at x = 0")
        x_max, n_points = grid.x_max, grid.n_points
        doublings = 0 if hard else max_doublings
    else:
        n_points = max(64, int(round(points_per_xi * x_max / xi)))
        doublings = 0 if hard else max_doublings

    for attempt in range(doublings + 1):
        shooter = _HalfLineShooter(profile, x_max, n_points, parity)
        E = _solve_level(shooter, j, E_est, rtol)
        x, u, w = _eigenfunction(shooter, E)
        peak = np.max(np.abs(u))
        outer = np.abs(u[x > 0.9 * x_max])
        if hard or (outer.size and np.max(outer) <= DECAY_TOL * peak):
            break
        log.debug("eigenfunction not decayed at x_max=%g; doubling", x_max)
        x_max *= 2
        n_points *= 2
    else:
        raise TruncationError(f"eigenfunction {n} has not decayed at x_max = {x_max / 2:g}; widen the grid")

    norm = math.sqrt(2.0 * np.sum(w * u * u))
    sign = 1.0 if u[0] > 0 else -1.0
    u = sign * u / norm
    # samples pinned to zero by a wall or by decay carry no sign information
    nodes_half = count_sign_changes(np.where(np.abs(u) > 1e-6 * np.max(np.abs(u)), u, 0.0))
    node_count = 2 * nodes_half + parity
    return OracleEigenresult(
        n=n,
        E=float(E),
        x=x,
        wavefunction=u,
        weights=w,
        node_count=node_count,
        parity="even" if parity == 0 else "odd",
        grid=Grid(0.0, x_max, n_points),
    )


# --------------------------------------------------------------------------


def _rk4_matrices(ksq_0, ksq_m, ksq_1, h):
    n = ksq_0.size

    def L(q):
        out = np.zeros((n, 2, 2))
        out[:, 0, 1] = 1.0
        out[:, 1, 0] = -q
        return out

    eye = np.broadcast_to(np.eye(2), (n, 2, 2))
    L0, Lm, L1 = L(ksq_0), L(ksq_m), L(ksq_1)
    K1 = L0
    K2 = Lm @ (eye + 0.5 * h * K1)
    K3 = Lm @ (eye + 0.5 * h * K2)
    K4 = L1 @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)


def _rk4_run(profile, E, u0, up0, x, substeps):
    edges = np.linspace(x[0], x[-1], (x.size - 1) * substeps + 1)
    h = edges[1] - edges[0]
    q0 = profile.ksq(E, edges[:-1])
    qm = profile.ksq(E, 0.5 * (edges[:-1] + edges[1:]))
    q1 = profile.ksq(E, edges[1:])
    states = chain_states(_rk4_matrices(q0, qm, q1, h), (u0, up0))
    return states[::substeps]


def integrate_ivp(profile: KsqProfile, E: float, u0: float, up0: float, grid: Grid, substeps: int = 1):
    """RK4 solution of ``u'' = -k^2 u`` sampled on ``grid``.

    Returns an ``(n_points, 2)`` array of ``(u, u')``.  The run is repeated
    with doubled substeps; a difference above ``1e-6`` of the peak amplitude
    raises :class:`AccuracyError`.
    """
    x = grid.x
    if profile.singular_at_zero and x[0] <= 0 <= x[-1]:
        raise SingularPointError("grid touches the singular point; offset it from x = 0")
    coarse = _rk4_run(profile, E, u0, up0, x, substeps)
    fine = _rk4_run(profile, E, u0, up0, x, 2 * substeps)
    peak = np.max(np.abs(fine[:, 0]))
    drift = np.max(np.abs(fine[:, 0] - coarse[:, 0]))
    if drift > 1e-6 * max(peak, 1e-300):
        raise AccuracyError(f"RK4 step too coarse: step-doubling drift {drift:.3g} vs peak {peak:.3g}")
    return fine


def two_layer_cos_kl(k1: float, a: float, k2: float, b: float) -> float:
    """``cos(kappa L)`` for a cell of two homogeneous layers (``k1``, thickness ``a``; ``k2``, ``b``)."""
    return math.cos(k1 * a) * math.cos(k2 * b) - (k1**2 + k2**2) / (2 * k1 * k2) * math.sin(k1 * a) * math.sin(k2 * b)
