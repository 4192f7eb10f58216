"""Hot loops: products of chains of 2x2 matrices.

Every fixed-step integrator in the package reduces to a linear recurrence
``v[j+1] = A[j] @ v[j]`` with 2x2 step matrices (Numerov, RK4, the
transfer-matrix composition).  Each kernel has a numba loop and a pure-numpy
fallback built on blocked prefix scans; ``WAVEBASIS_DISABLE_NUMBA=1``
selects the fallback.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "chain_states",
    "chain_product",
    "count_sign_changes",
    "numerov_steps",
    "chain_states_numba",
    "chain_states_numpy",
    "chain_product_numba",
    "chain_product_numpy",
]


@njit
def chain_states_numba(A, v0):
    n = A.shape[0]
    out = np.empty((n + 1, 2), dtype=A.dtype)
    a = v0[0]
    b = v0[1]
    out[0, 0] = a
    out[0, 1] = b
    for j in range(n):
        na = A[j, 0, 0] * a + A[j, 0, 1] * b
        nb = A[j, 1, 0] * a + A[j, 1, 1] * b
        a = na
        b = nb
        out[j + 1, 0] = a
        out[j + 1, 1] = b
    return out


@njit
def chain_product_numba(A):
    p00 = A[0, 0, 0] * 0 + 1
    p01 = A[0, 0, 0] * 0
    p10 = A[0, 0, 0] * 0
    p11 = A[0, 0, 0] * 0 + 1
    for j in range(A.shape[0]):
        a00 = A[j, 0, 0]
        a01 = A[j, 0, 1]
        a10 = A[j, 1, 0]
        a11 = A[j, 1, 1]
        n00 = a00 * p00 + a01 * p10
        n01 = a00 * p01 + a01 * p11
        n10 = a10 * p00 + a11 * p10
        n11 = a10 * p01 + a11 * p11
        p00 = n00
        p01 = n01
        p10 = n10
        p11 = n11
    out = np.empty((2, 2), dtype=A.dtype)
    out[0, 0] = p00
    out[0, 1] = p01
    out[1, 0] = p10
    out[1, 1] = p11
    return out


def _matmul2(X, Y):
    # batched 2x2 product X @ Y, written out: faster than np.matmul for tiny blocks
    out = np.empty(np.broadcast_shapes(X.shape, Y.shape), dtype=np.result_type(X, Y))
    out[..., 0, 0] = X[..., 0, 0] * Y[..., 0, 0] + X[..., 0, 1] * Y[..., 1, 0]
    out[..., 0, 1] = X[..., 0, 0] * Y[..., 0, 1] + X[..., 0, 1] * Y[..., 1, 1]
    out[..., 1, 0] = X[..., 1, 0] * Y[..., 0, 0] + X[..., 1, 1] * Y[..., 1, 0]
    out[..., 1, 1] = X[..., 1, 0] * Y[..., 0, 1] + X[..., 1, 1] * Y[..., 1, 1]
    return out


SCAN_BLOCK = 64


def chain_states_numpy(A, v0, block=SCAN_BLOCK):
    # Blocked scan.  Prefix products P[j] = A[j] @ ... @ A[0] over the whole
    # chain are ill-conditioned when the recurrence has growing and decaying
    # modes, so scans run only inside short blocks (all blocks at once) and
    # the state vector is carried across block boundaries.
    A = np.asarray(A)
    n = A.shape[0]
    nb = -(-n // block)
    pad = nb * block - n
    P = A
    if pad:
        P = np.concatenate([A, np.broadcast_to(np.eye(2, dtype=A.dtype), (pad, 2, 2))], axis=0)
    P = P.reshape(nb, block, 2, 2).copy()
    shift = 1
    while shift < block:
        P[:, shift:] = _matmul2(P[:, shift:], P[:, :-shift])
        shift *= 2
    starts = np.empty((nb, 2), dtype=np.result_type(P, v0))
    v = np.asarray(v0, dtype=starts.dtype)
    for b in range(nb):
        starts[b] = v
        T = P[b, -1]
        v = np.array([T[0, 0] * v[0] + T[0, 1] * v[1], T[1, 0] * v[0] + T[1, 1] * v[1]])
    states = np.empty((nb, block, 2), dtype=starts.dtype)
    states[..., 0] = P[..., 0, 0] * starts[:, None, 0] + P[..., 0, 1] * starts[:, None, 1]
    states[..., 1] = P[..., 1, 0] * starts[:, None, 0] + P[..., 1, 1] * starts[:, None, 1]
    out = np.empty((n + 1, 2), dtype=starts.dtype)
    out[0] = v0
    out[1:] = states.reshape(-1, 2)[:n]
    return out


def chain_product_numpy(A):
    P = np.asarray(A)
    if P.shape[0] == 0:
        return np.eye(2, dtype=P.dtype)
    while P.shape[0] > 1:
        if P.shape[0] % 2:
            P = np.concatenate([P, np.eye(2, dtype=P.dtype)[None]], axis=0)
        P = _matmul2(P[1::2], P[0::2])
    return P[0].copy()


def chain_states(A, v0):
    """States ``v[0..n]`` of the recurrence ``v[j+1] = A[j] @ v[j]``.

    Parameters
    ----------
    A : ndarray, shape (n, 2, 2)
        Step matrices, real or complex.
    v0 : array_like, shape (2,)
        Initial state.

    Returns
    -------
    ndarray, shape (n + 1, 2)
    """
    A = np.ascontiguousarray(A)
    v0 = np.asarray(v0, dtype=A.dtype)
    if A.shape[0] == 0:
        return v0[None, :].copy()
    if USE_NUMBA:
        return chain_states_numba(A, v0)
    return chain_states_numpy(A, v0)


def chain_product(A):
    """Ordered product ``A[n-1] @ ... @ A[0]`` of a chain of 2x2 matrices."""
    A = np.ascontiguousarray(A)
    if A.shape[0] == 0:
        return np.eye(2, dtype=A.dtype)
    if USE_NUMBA:
        return chain_product_numba(A)
    return chain_product_numpy(A)


def count_sign_changes(u):
    """Number of strict sign changes along ``u`` (zeros are skipped)."""
    s = np.sign(u)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def numerov_steps(f, h):
    """Numerov step matrices for ``u'' = -f(x) u`` on a uniform grid.

    Returns ``A`` with ``(u[j+1], u[j]) = A[j-1] @ (u[j], u[j-1])`` for
    ``j = 1 .. len(f) - 2``.
    """
    f = np.asarray(f, dtype=float)
    w = 1.0 + (h * h / 12.0) * f
    A = np.zeros((f.size - 2, 2, 2))
    A[:, 0, 0] = (12.0 - 10.0 * w[1:-1]) / w[2:]
    A[:, 0, 1] = -w[:-2] / w[2:]
    A[:, 1, 0] = 1.0
    return A
