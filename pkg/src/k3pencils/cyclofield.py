"""Exact arithmetic in the cyclotomic field Q(zeta), zeta = exp(2 pi i / 120).

A :class:`CycNum` is a vector of 32 rational coefficients over the power
basis zeta^0 .. zeta^31, held as integer numerators over one positive common
denominator in lowest terms.  That representation is unique, so equality
and hashing are coefficient-wise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .kernels import DEGREE, ORDER, PHI_TAIL, POWERS

_POWER_ROWS = tuple(
    tuple((j, int(c)) for j, c in enumerate(POWERS[e]) if c) for e in range(ORDER)
)


def _fold(full: list[int]) -> list[int]:
    """Reduce a coefficient list of any length below 2*DEGREE modulo Phi_120."""
    for k in range(len(full) - 1, DEGREE - 1, -1):
        c = full[k]
        if c:
            base = k - DEGREE
            for j, t in PHI_TAIL:
                full[base + j] += c * t
    return full[:DEGREE]


def _mul_coeffs(a: Sequence[int], b: Sequence[int]) -> list[int]:
    nz_b = [(j, y) for j, y in enumerate(b) if y]
    full = [0] * (2 * DEGREE - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in nz_b:
                full[i + j] += x * y
    return _fold(full)


def _galois_chain() -> tuple[int, ...]:
    """Automorphisms tau_0..tau_4 with H_{i+1} = H_i u tau_i H_i, each of index 2.

    Used for the norm-tower inversion: multiplying by tau_i of the partial
    norm doubles the subgroup fixing it, ending in Q after five steps.
    """
    units = [u for u in range(1, ORDER) if math.gcd(u, ORDER) == 1]
    subgroup = {1}
    chain = []
    while len(subgroup) < len(units):
        for t in units:
            if t not in subgroup and (t * t) % ORDER in subgroup:
                chain.append(t)
                subgroup |= {(t * h) % ORDER for h in subgroup}
                break
    return tuple(chain)


_CHAIN = _galois_chain()


class CycNum:
    """An element of Q(zeta_120) in canonical reduced form."""

    __slots__ = ("coeffs", "den", "_hash")

    def __init__(self, coeffs: Iterable[int] = (), den: int = 1):
        nums = [int(c) for c in coeffs]
        if len(nums) > DEGREE:
            nums = _fold(nums + [0] * max(0, 2 * DEGREE - 1 - len(nums)))
        nums += [0] * (DEGREE - len(nums))
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            nums = [-c for c in nums]
        g = math.gcd(den, *nums)
        if g > 1:
            den //= g
            nums = [c // g for c in nums]
        self.coeffs = tuple(nums)
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...], den: int) -> "CycNum":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.den = den
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rational(cls, value: int | Fraction) -> "CycNum":
        value = Fraction(value)
        return cls((value.numerator,), value.denominator)

    @classmethod
    def coerce(cls, value) -> "CycNum":
        if isinstance(value, CycNum):
            return value
        if isinstance(value, (int, Fraction, np.integer)):
            return cls.from_rational(int(value) if isinstance(value, np.integer) else value)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycNum")

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.coeffs[0], self.den)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.coeffs)

    # -- ring operations --------------------------------------------------

    def __add__(self, other) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return CycNum([x + y for x, y in zip(self.coeffs, other.coeffs)], self.den)
        return CycNum(
            [x * other.den + y * self.den for x, y in zip(self.coeffs, other.coeffs)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._raw(tuple(-c for c in self.coeffs), self.den)

    def __sub__(self, other) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycNum":
        return CycNum.coerce(other) - self

    def __mul__(self, other) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNum([c * other.numerator for c in self.coeffs], self.den * other.denominator)
        if not isinstance(other, CycNum):
            return NotImplemented
        return CycNum(_mul_coeffs(self.coeffs, other.coeffs), self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_120)")
            return self * (1 / other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> "CycNum":
        return CycNum.coerce(other) * self.inv()

    def __pow__(self, k: int) -> "CycNum":
        if k < 0:
            return self.inv() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, m: int) -> "CycNum":
        """Image under the automorphism zeta -> zeta^m (gcd(m, 120) = 1)."""
        if math.gcd(m, ORDER) != 1:
            raise ValueError(f"zeta -> zeta^{m} is not an automorphism")
        out = [0] * DEGREE
        for k, c in enumerate(self.coeffs):
            if c:
                for j, t in _POWER_ROWS[(k * m) % ORDER]:
                    out[j] += c * t
        return CycNum._raw(tuple(out), self.den)

    def conj(self) -> "CycNum":
        """Complex conjugation, the automorphism zeta -> zeta^-1."""
        return self.galois(ORDER - 1)

    def inv(self) -> "CycNum":
        """Multiplicative inverse via the norm tower Q(zeta) > ... > Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_120)")
        partial = self
        cofactor = ONE
        for tau in _CHAIN:
            conjugate = partial.galois(tau)
            cofactor = cofactor * conjugate
            partial = partial * conjugate
        norm = partial.to_fraction()
        return cofactor * (1 / norm)

    def norm(self) -> Fraction:
        partial = self
        for tau in _CHAIN:
            partial = partial * partial.galois(tau)
        return partial.to_fraction()

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self.den == other.den and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.coeffs[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.coeffs, self.den))
        return self._hash

    def sort_key(self) -> tuple:
        """A fixed total order, used only to make canonical choices deterministic."""
        return (self.den, self.coeffs)

    # -- display ----------------------------------------------------------

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / ORDER), math.sin(2 * math.pi / ORDER))
        return sum(c * z**k for k, c in enumerate(self.coeffs) if c) / self.den

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycNum({Fraction(self.coeffs[0], self.den)})"
        terms = [f"{c:+d}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        body = " ".join(terms)
        return f"CycNum(({body})/{self.den})" if self.den != 1 else f"CycNum({body})"

    def to_numerators(self, den: int) -> list[int]:
        """Numerator vector over a given common denominator (must be a multiple of self.den)."""
        q, r = divmod(den, self.den)
        if r:
            raise ValueError(f"denominator {den} is not a multiple of {self.den}")
        return [c * q for c in self.coeffs]


ZERO = CycNum()
ONE = CycNum((1,))


@lru_cache(maxsize=None)
def zeta(k: int = 1) -> CycNum:
    """zeta^k for the primitive 120th root of unity zeta."""
    return CycNum._raw(tuple(int(c) for c in POWERS[k % ORDER]), 1)


I = zeta(30)
OMEGA = zeta(40)
EPSILON = zeta(24)
GAMMA = zeta(15)
SQRT2 = GAMMA + GAMMA.conj()
SQRT5 = 2 * (EPSILON + EPSILON**4) + 1
GOLDEN = (1 + SQRT5) / 2


def real_part(a: CycNum) -> CycNum:
    return (a + a.conj()) / 2


def imag_part(a: CycNum) -> CycNum:
    return (a - a.conj()) / (2 * I)


def common_denominator(values: Iterable[CycNum]) -> int:
    return math.lcm(1, *(v.den for v in values))


def to_array(values: Sequence[CycNum], den: int | None = None) -> tuple[np.ndarray, int]:
    """Stack numerators over a shared denominator; returns (array of shape (len, 32), den)."""
    den = den or common_denominator(values)
    rows = [v.to_numerators(den) for v in values]
    try:
        arr = np.array(rows, dtype=np.int64)
    except OverflowError:
        arr = np.array(rows, dtype=object)
    return arr.reshape(len(values), DEGREE), den


def from_array(arr: np.ndarray, den: int = 1) -> list[CycNum]:
    flat = np.asarray(arr).reshape(-1, DEGREE)
    return [CycNum((int(c) for c in row), den) for row in flat]


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------


class CycMatrix:
    """Immutable dense matrix over Q(zeta_120)."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Sequence[Sequence]):
        data = tuple(tuple(CycNum.coerce(x) for x in row) for row in entries)
        if not data or not data[0]:
            raise ValueError("matrix must be non-empty")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix")
        self.entries = data
        self.rows = len(data)
        self.cols = width
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "CycMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "CycMatrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def column(cls, vec: Sequence) -> "CycMatrix":
        return cls([[x] for x in vec])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[CycNum, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[CycNum, ...]:
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, CycMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        self._same_shape(other)
        return CycMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        self._same_shape(other)
        return CycMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "CycMatrix":
        return CycMatrix([[-a for a in r] for r in self.entries])

    def scale(self, c) -> "CycMatrix":
        c = CycNum.coerce(c)
        return CycMatrix([[c * a for a in r] for r in self.entries])

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self.entries:
            out.append([_dot(r, c) for c in cols])
        return CycMatrix(out)

    def apply(self, vec: Sequence[CycNum]) -> tuple[CycNum, ...]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(_dot(r, vec) for r in self.entries)

    def transpose(self) -> "CycMatrix":
        return CycMatrix([self.col(j) for j in range(self.cols)])

    def conj(self) -> "CycMatrix":
        return CycMatrix([[a.conj() for a in r] for r in self.entries])

    def trace(self) -> CycNum:
        return sum((self.entries[i][i] for i in range(min(self.shape))), ZERO)

    def det(self) -> CycNum:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.entries])

    def is_identity(self) -> bool:
        return all(
            (a == ONE) if i == j else a.is_zero()
            for i, r in enumerate(self.entries)
            for j, a in enumerate(r)
        )

    def to_array(self, den: int | None = None) -> tuple[np.ndarray, int]:
        flat = [a for r in self.entries for a in r]
        arr, den = to_array(flat, den)
        return arr.reshape(self.rows, self.cols, DEGREE), den

    @classmethod
    def from_array(cls, arr: np.ndarray, den: int = 1) -> "CycMatrix":
        arr = np.asarray(arr)
        rows, cols = arr.shape[:2]
        flat = from_array(arr, den)
        return cls([flat[i * cols : (i + 1) * cols] for i in range(rows)])

    def _same_shape(self, other: "CycMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        return f"CycMatrix({self.rows}x{self.cols})"


def _dot(u: Sequence[CycNum], v: Sequence[CycNum]) -> CycNum:
    acc = ZERO
    for a, b in zip(u, v):
        if a.is_zero() or b.is_zero():
            continue
        acc = acc + a * b
    return acc


def _bareiss_det(m: list[list[CycNum]]) -> CycNum:
    n = len(m)
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def solve_kernel(m: CycMatrix) -> list[tuple[CycNum, ...]]:
    """Basis of the right kernel of ``m``; empty iff ``m`` is injective.

    Fraction-free elimination: rows are combined by cross-multiplication and
    back substitution rescales the whole vector instead of dividing, so no
    field inverse is ever taken.
    """
    rows = [list(r) for r in m.entries]
    n_cols = m.cols
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [p * x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    piv_vals = [rows[i][pc] for i, pc in enumerate(pivots)]
    basis = []
    for f in free:
        # pivot row i reads p_i x_{pc_i} + sum_{free j} a_ij x_j = 0; take x_f = prod p_k
        vec = [ZERO] * n_cols
        scale = ONE
        for p in piv_vals:
            scale = scale * p
        vec[f] = scale
        for i, pc in enumerate(pivots):
            if rows[i][f].is_zero():
                continue
            others = ONE
            for k, p in enumerate(piv_vals):
                if k != i:
                    others = others * p
            vec[pc] = -(rows[i][f] * others)
        basis.append(tuple(vec))
    return basis


def _trace_table() -> dict[CycNum, int]:
    table = {}
    for k in range(ORDER // 2 + 1):
        key = zeta(k) + zeta(-k)
        table.setdefault(key, k)
    return table


_TRACES = _trace_table()


def eigenvalues_finite_order(m: CycMatrix) -> tuple[CycNum, CycNum]:
    """Eigenvalues (zeta^k, zeta^-k) of a 2x2 matrix of determinant 1 and order dividing 120."""
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    det = m.det()
    if det != 1:
        raise ValueError(f"expected determinant 1, got {det!r}")
    trace = m.trace()
    k = _TRACES.get(trace)
    if k is None:
        raise ValueError("no 120th root of unity matches the trace; element outside the supported groups")
    lam, mu = zeta(k), zeta(-k)
    for root in (lam, mu):
        if (root * root - trace * root + det).is_zero() is False:
            raise ArithmeticError("root does not satisfy the characteristic polynomial")
    return lam, mu
