"""Differential transfer matrices for ``y'' + f(x) y = 0`` with complex ``f``.

The state is ``F = (u, v, u', v')`` with ``y = u + i v``.  Every 2x2 block of
the 4x4 propagator has the rotation form ``[[p, -q], [q, p]]``, the real image
of the complex number ``p + i q``; internally a :class:`TransferMatrix4` is
therefore stored as a complex 2x2 matrix acting on ``(y, y')`` and all matrix
functions reduce to complex scalar functions.

Over one interval of length ``L`` the unordered exponential has blocks

    C = cosh D,   S = L D^-1 sinh D,   T = (1/L) B S,

with ``D^2 = L B`` and ``B`` the image of ``-int f``.  Products of many short
intervals restore the ordered exponential (:func:`piecewise_propagate`).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .bases import cos_sqrt, sinc_sqrt
from .errors import IntegrationError, PreconditionError
from .kernels import chain_product
from .profiles import KsqProfile

__all__ = [
    "ComplexCoefficient",
    "AccumulatedB",
    "StateVector4",
    "TransferMatrix4",
    "CSTBlocks",
    "rot",
    "accumulate_B",
    "matrix_D",
    "transfer_Q",
    "cst_blocks",
    "propagate",
    "compose",
    "invert",
    "piecewise_propagate",
    "segment_matrices",
]

QUAD_TOL = 1e-10
GAUSS_ORDER = 8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


def rot(z) -> np.ndarray:
    """Real 2x2 image ``[[Re z, -Im z], [Im z, Re z]]`` of a complex scalar."""
    z = complex(z)
    return np.array([[z.real, -z.imag], [z.imag, z.real]])


@dataclass(frozen=True)
class ComplexCoefficient:
    """``f(x) = g(x) + i h(x)``; ``g`` and ``h`` take and return arrays.

    ``primitive``, if given, is an exact antiderivative of ``f``; segment
    integrals then avoid quadrature, which matters for discontinuous ``f``.
    """

    g: Callable
    h: Callable | None = None
    primitive: Callable | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        gv = np.broadcast_to(np.asarray(self.g(x), dtype=float), x.shape)
        if self.h is None:
            return gv.astype(complex)
        hv = np.broadcast_to(np.asarray(self.h(x), dtype=float), x.shape)
        return gv + 1j * hv

    @property
    def is_real(self) -> bool:
        return self.h is None

    @classmethod
    def constant(cls, value) -> "ComplexCoefficient":
        value = complex(value)
        g = lambda x: np.full(np.shape(x), value.real)  # noqa: E731
        if value.imag == 0:
            return cls(g)
        return cls(g, lambda x: np.full(np.shape(x), value.imag))

    @classmethod
    def from_profile(cls, profile: KsqProfile, E: float) -> "ComplexCoefficient":
        """Real coefficient ``f = k^2(x; E)`` with its analytic antiderivative."""
        pot, c = profile.potential, profile.prefactor
        return cls(
            lambda x: profile.ksq(E, x),
            primitive=lambda x: c * (E * np.asarray(x, dtype=float) - pot.antiderivative(x)),
        )


@dataclass(frozen=True)
class AccumulatedB:
    """``G = int g``, ``H = int h`` over an interval; ``B = -[[G, -H], [H, G]]``."""

    G: float
    H: float

    @property
    def block(self) -> np.ndarray:
        return -rot(complex(self.G, self.H))

    @property
    def scalar(self) -> complex:
        """The complex number whose image is ``B``, i.e. ``-(G + iH)``."""
        return -complex(self.G, self.H)


@dataclass(frozen=True)
class StateVector4:
    u: float
    v: float
    du: float
    dv: float

    @property
    def array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.du, self.dv])

    @property
    def y(self) -> complex:
        return complex(self.u, self.v)

    @property
    def dy(self) -> complex:
        return complex(self.du, self.dv)

    @classmethod
    def from_complex(cls, y, dy) -> "StateVector4":
        y, dy = complex(y), complex(dy)
        return cls(y.real, y.imag, dy.real, dy.imag)


@dataclass(frozen=True)
class CSTBlocks:
    C: np.ndarray
    S: np.ndarray
    T: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.C, self.S], [self.T, self.C]])


@dataclass(frozen=True, eq=False)
class TransferMatrix4:
    """Propagator from ``a`` to ``b``; ``m`` is the complex 2x2 form."""

    m: np.ndarray
    a: float
    b: float

    @property
    def matrix(self) -> np.ndarray:
        """Real 4x4 matrix acting on ``(u, v, u', v')``."""
        out = np.empty((4, 4))
        for i in range(2):
            for j in range(2):
                out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = rot(self.m[i, j])
        return out

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def trace(self) -> complex:
        return complex(self.m[0, 0] + self.m[1, 1])


def _quad_real(fn, a, b):
    val, err, info = integrate.quad(fn, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400, full_output=1)[:3]
    if err > 1e3 * QUAD_TOL * max(1.0, abs(val)):
        raise IntegrationError(f"quadrature of the coefficient on [{a}, {b}] did not converge")
    return val


def accumulate_B(f: ComplexCoefficient, a: float, b: float) -> AccumulatedB:
    """``G = int_a^b g``, ``H = int_a^b h`` by adaptive quadrature."""
    if a == b:
        return AccumulatedB(0.0, 0.0)
    G = _quad_real(lambda t: float(np.real(f(t))), a, b)
    H = 0.0 if f.is_real else _quad_real(lambda t: float(np.imag(f(t))), a, b)
    return AccumulatedB(G, H)


def _principal_sqrt(z: complex) -> complex:
    # clear a negative zero so the cut on the negative axis maps to +i sqrt
    z = complex(z.real, 0.0) if z.imag == 0 else z
    return cmath.sqrt(z)


def matrix_D(B: AccumulatedB, x: float) -> np.ndarray:
    """Real 2x2 matrix root with ``D @ D = x * B.block``.

    Image of the principal square root of ``-x (G + iH)``.
    """
    if x < 0:
        raise PreconditionError("matrix_D needs x >= 0")
    return rot(_principal_sqrt(x * B.scalar))


def _blocks_from_d(d: complex, L: float, Bs: complex):
    """Scalar (c, s, t) from a root d with d^2 = L * Bs."""
    if abs(d) < 1e-4:
        d2 = d * d
        ch = 1 + d2 / 2 + d2 * d2 / 24 + d2**3 / 720
        shc = 1 + d2 / 6 + d2 * d2 / 120 + d2**3 / 5040
    else:
        ch = cmath.cosh(d)
        shc = cmath.sinh(d) / d
    s = L * shc
    t = Bs * shc  # (1/L) * B * S
    return ch, s, t


def transfer_Q(f: ComplexCoefficient, a: float, b: float, root_sign: int = 1) -> TransferMatrix4:
    """Unordered-exponential transfer matrix over ``[a, b]``.

    ``root_sign=-1`` uses the other matrix root ``-D``; the result is the same
    because only even functions of ``D`` appear.
    """
    L = b - a
    if L == 0:
        return TransferMatrix4(np.eye(2, dtype=complex), a, b)
    Bacc = accumulate_B(f, a, b)
    Bs = Bacc.scalar
    d = root_sign * _principal_sqrt(L * Bs)
    c, s, t = _blocks_from_d(d, L, Bs)
    return TransferMatrix4(np.array([[c, s], [t, c]], dtype=complex), a, b)


def cst_blocks(f: ComplexCoefficient, x: float) -> CSTBlocks:
    """The real 2x2 blocks ``C, S, T`` of the propagator over ``[0, x]``."""
    if x == 0:
        z = np.zeros((2, 2))
        return CSTBlocks(np.eye(2), z, z)
    Bacc = accumulate_B(f, 0.0, x)
    B = Bacc.block
    D = matrix_D(Bacc, x) if x > 0 else rot(_principal_sqrt(x * Bacc.scalar))
    d = complex(D[0, 0], D[1, 0])
    ch, s, _ = _blocks_from_d(d, x, Bacc.scalar)
    C = rot(ch)
    S = rot(s)
    T = (B @ S) / x
    return CSTBlocks(C, S, T)


def propagate(Q: TransferMatrix4, F0: StateVector4) -> StateVector4:
    """``F(b) = Q F(a)``."""
    out = Q.matrix @ F0.array
    return StateVector4(*map(float, out))


def compose(Q_ab: TransferMatrix4, Q_bc: TransferMatrix4) -> TransferMatrix4:
    """``Q_ac = Q_bc Q_ab``; the intervals must chain."""
    tol = 1e-12 * max(1.0, abs(Q_ab.b), abs(Q_bc.a))
    if abs(Q_ab.b - Q_bc.a) > tol:
        raise PreconditionError(f"intervals do not chain: {Q_ab.b} != {Q_bc.a}")
    return TransferMatrix4(Q_bc.m @ Q_ab.m, Q_ab.a, Q_bc.b)


def invert(Q: TransferMatrix4) -> TransferMatrix4:
    """``Q_ba = Q_ab^-1``."""
    return TransferMatrix4(np.linalg.inv(Q.m), Q.b, Q.a)


def _segment_integrals(f, edges):
    """int f over each [edges[i], edges[i+1]]: exact primitive or Gauss-Legendre."""
    if getattr(f, "primitive", None) is not None:
        return np.diff(np.asarray(f.primitive(edges), dtype=complex))
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL_WEIGHTS)


def _segment_edges(a, b, n_segments, breakpoints):
    if breakpoints is None:
        return np.linspace(a, b, n_segments + 1)
    cuts = np.unique(np.concatenate([[a, b], [t for t in breakpoints if a < t < b]]))
    lengths = np.diff(cuts)
    counts = np.maximum(1, np.round(n_segments * lengths / (b - a)).astype(int))
    return np.unique(np.concatenate([np.linspace(lo, hi, k + 1) for lo, hi, k in zip(cuts[:-1], cuts[1:], counts)]))


def segment_matrices(f: ComplexCoefficient, edges) -> np.ndarray:
    """Per-segment complex 2x2 propagators, shape ``(len(edges) - 1, 2, 2)``."""
    edges = np.asarray(edges, dtype=float)
    L = np.diff(edges)
    F = _segment_integrals(f, edges)
    w = L * F  # c = cos sqrt(w), s = L sinc sqrt(w), t = -F sinc sqrt(w)
    c = np.asarray(cos_sqrt(w), dtype=complex)
    shc = np.asarray(sinc_sqrt(w), dtype=complex)
    A = np.empty((L.size, 2, 2), dtype=complex)
    A[:, 0, 0] = c
    A[:, 0, 1] = L * shc
    A[:, 1, 0] = -F * shc
    A[:, 1, 1] = c
    return A


def piecewise_propagate(
    f: ComplexCoefficient, a: float, b: float, n_segments: int, breakpoints=None
) -> TransferMatrix4:
    """Ordered product of single-segment transfer matrices over ``[a, b]``.

    Converges to the exact propagator with second order in the segment
    length.  Segment integrals of ``f`` use 8-point Gauss-Legendre.  When
    ``breakpoints`` are given, segment edges include them (exact for
    piecewise-constant ``f``).
    """
    if n_segments < 1:
        raise PreconditionError("n_segments must be >= 1")
    if b == a:
        return TransferMatrix4(np.eye(2, dtype=complex), a, b)
    edges = _segment_edges(a, b, n_segments, breakpoints)
    return TransferMatrix4(chain_product(segment_matrices(f, edges)), a, b)
