"""Batched integer kernels for arithmetic in Z[zeta_120].

Elements are stored as integer coefficient vectors of length 32 over the
power basis zeta^0 .. zeta^31.  Everything here works on numerators only;
callers keep track of denominators.

Two interchangeable implementations exist for every kernel: a numba
``@njit`` version operating on int64 arrays, and a numpy version that also
accepts ``dtype=object`` arrays of Python ints.  The active backend is chosen
once at import time from the ``K3PENCILS_KERNELS`` environment variable
(``numba`` or ``numpy``; default ``numba`` when numba imports).  Inputs that
could overflow int64 are always routed to the object/numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

ORDER = 120
DEGREE = 32


def cyclotomic_polynomial(m: int) -> list[int]:
    """Integer coefficients (constant term first) of the m-th cyclotomic polynomial."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _exact_divide(poly, cyclotomic_polynomial(d))
    return poly


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c, r = divmod(num[k + len(den) - 1], lead)
        if r:
            raise ArithmeticError("non-exact polynomial division")
        q[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return q


PHI = cyclotomic_polynomial(ORDER)
assert len(PHI) == DEGREE + 1 and PHI[-1] == 1

# zeta^32 = -(PHI[0] + PHI[1] zeta + ... + PHI[31] zeta^31)
PHI_TAIL = tuple((j, -c) for j, c in enumerate(PHI[:-1]) if c)


def _power_table() -> np.ndarray:
    """Row e holds zeta^e reduced to the power basis, for 0 <= e < 2*ORDER."""
    rows = np.zeros((2 * ORDER, DEGREE), dtype=np.int64)
    cur = [0] * DEGREE
    cur[0] = 1
    for e in range(2 * ORDER):
        rows[e] = cur
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j, c in PHI_TAIL:
                cur[j] += top * c
    return rows


POWERS = _power_table()
# rows for zeta^32 .. zeta^62, used to fold a full product back to degree < 32
FOLD = POWERS[DEGREE : 2 * DEGREE - 1].copy()
FOLD_GROWTH = int(np.abs(FOLD).sum(axis=0).max()) + 1

_INT64_BUDGET = 2**62


def _backend_name() -> str:
    name = os.environ.get("K3PENCILS_KERNELS", "numba" if HAVE_NUMBA else "numpy").lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"K3PENCILS_KERNELS must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        name = "numpy"
    return name


BACKEND = _backend_name()


# --------------------------------------------------------------------------
# numpy implementations (int64 or object dtype)
# --------------------------------------------------------------------------


def _polymul_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    full = np.zeros((n, 2 * DEGREE - 1), dtype=a.dtype)
    for i in range(DEGREE):
        full[:, i : i + DEGREE] += a[:, i : i + 1] * b
    fold = FOLD if a.dtype != object else FOLD.astype(object)
    return full[:, :DEGREE] + full[:, DEGREE:] @ fold


def _matmul_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # a: (N, r, k, 32), b: (N, k, c, 32)
    n, r, k, _ = a.shape
    c = b.shape[2]
    lhs = np.broadcast_to(a[:, :, :, None, :], (n, r, k, c, DEGREE)).reshape(-1, DEGREE)
    rhs = np.broadcast_to(b[:, None, :, :, :], (n, r, k, c, DEGREE)).reshape(-1, DEGREE)
    prod = _polymul_numpy(np.ascontiguousarray(lhs), np.ascontiguousarray(rhs))
    return prod.reshape(n, r, k, c, DEGREE).sum(axis=2)


# --------------------------------------------------------------------------
# numba implementations (int64 only)
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _polymul_one(a, b, fold, out):
        full = np.zeros(2 * 32 - 1, dtype=np.int64)
        for i in range(32):
            ai = a[i]
            if ai != 0:
                for j in range(32):
                    full[i + j] += ai * b[j]
        for j in range(32):
            out[j] += full[j]
        for k in range(31):
            c = full[32 + k]
            if c != 0:
                for j in range(32):
                    out[j] += c * fold[k, j]

    @njit(cache=True)
    def _polymul_nb(a, b, fold):
        n = a.shape[0]
        out = np.zeros((n, 32), dtype=np.int64)
        for t in range(n):
            _polymul_one(a[t], b[t], fold, out[t])
        return out

    @njit(cache=True)
    def _matmul_nb(a, b, fold):
        n, r, k, _ = a.shape
        c = b.shape[2]
        out = np.zeros((n, r, c, 32), dtype=np.int64)
        for t in range(n):
            for i in range(r):
                for j in range(c):
                    for m in range(k):
                        _polymul_one(a[t, i, m], b[t, m, j], fold, out[t, i, j])
        return out


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def _max_abs(x: np.ndarray) -> int:
    if x.size == 0:
        return 0
    return int(max(abs(int(x.max())), abs(int(x.min()))))


def fits_int64(a: np.ndarray, b: np.ndarray, terms: int = 1) -> bool:
    """True if products of ``a`` and ``b`` summed ``terms`` times stay inside int64."""
    bound = _max_abs(a) * _max_abs(b) * DEGREE * FOLD_GROWTH * terms
    return bound < _INT64_BUDGET


def _as_object(x: np.ndarray) -> np.ndarray:
    return x.astype(object) if x.dtype != object else x


def polymul(a: np.ndarray, b: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Row-wise product of two (N, 32) coefficient arrays in Z[zeta]."""
    backend = backend or BACKEND
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[1] != DEGREE:
        raise ValueError(f"expected matching (N, {DEGREE}) arrays, got {a.shape} and {b.shape}")
    if a.dtype == object or b.dtype == object or not fits_int64(a, b):
        return _polymul_numpy(_as_object(a), _as_object(b))
    a = a.astype(np.int64, copy=False)
    b = b.astype(np.int64, copy=False)
    if backend == "numba":
        return _polymul_nb(np.ascontiguousarray(a), np.ascontiguousarray(b), FOLD)
    return _polymul_numpy(a, b)


def matmul(a: np.ndarray, b: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Batched matrix product over Z[zeta]: (N, r, k, 32) x (N, k, c, 32) -> (N, r, c, 32)."""
    backend = backend or BACKEND
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 4 or b.ndim != 4 or a.shape[0] != b.shape[0] or a.shape[2] != b.shape[1]:
        raise ValueError(f"incompatible batched shapes {a.shape} and {b.shape}")
    if a.dtype == object or b.dtype == object or not fits_int64(a, b, terms=a.shape[2]):
        return _matmul_numpy(_as_object(a), _as_object(b))
    a = a.astype(np.int64, copy=False)
    b = b.astype(np.int64, copy=False)
    if backend == "numba":
        return _matmul_nb(np.ascontiguousarray(a), np.ascontiguousarray(b), FOLD)
    return _matmul_numpy(a, b)


def matvec(a: np.ndarray, v: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Batched matrix-vector product: (N, r, k, 32) x (N, k, 32) -> (N, r, 32)."""
    return matmul(a, np.asarray(v)[:, :, None, :], backend=backend)[:, :, 0, :]


def proportional_rows(u: np.ndarray, v: np.ndarray, backend: str | None = None) -> np.ndarray:
    """For (N, k, 32) vectors, True where u[t] and v[t] are linearly dependent.

    Tests every 2x2 minor u_i v_j - u_j v_i for zero, so no division occurs.
    """
    n, k, _ = u.shape
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    if not pairs:
        return np.ones(n, dtype=bool)
    left_a = np.concatenate([u[:, i] for i, j in pairs])
    left_b = np.concatenate([v[:, j] for i, j in pairs])
    right_a = np.concatenate([u[:, j] for i, j in pairs])
    right_b = np.concatenate([v[:, i] for i, j in pairs])
    minors = polymul(left_a, left_b, backend) - polymul(right_a, right_b, backend)
    minors = minors.reshape(len(pairs), n, DEGREE)
    return ~np.any(minors != 0, axis=(0, 2))
