"""Binary polyhedral groups, the covering SU(2) x SU(2) -> SO(4), and the groups PG_n.

Quaternions are written in the 2x2 form [[a+bi, c+di], [-c+di, a-bi]] with
a, b, c, d real elements of Q(zeta_120).  A point x of R^4 is identified
with X(x) = [[x0+ix1, x2+ix3], [-x2+ix3, x0-ix1]] and sigma(p1, p2) acts by
X -> p1 X p2^-1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .cyclofield import GOLDEN, I, ONE, SQRT2, ZERO, CycMatrix, CycNum

KINDS = ("T", "O", "I")
BINARY_ORDER = {"T": 24, "O": 48, "I": 120}
PENCIL_DEGREE = {"T": 6, "O": 8, "I": 12}
KIND_OF_DEGREE = {6: "T", 8: "O", 12: "I"}
CLOSURE_CAP = 240
# every matrix entry of sigma(p1, p2) lies in (1/MATRIX_DEN) Z[zeta]
MATRIX_DEN = 4


class GroupError(RuntimeError):
    """Group construction produced an impossible result (wrong generators or a dedup fault)."""


@dataclass(frozen=True, eq=False)
class Quat:
    """Unit quaternion in SU(2) form."""

    matrix: CycMatrix

    @classmethod
    def from_coords(cls, a, b, c, d) -> "Quat":
        a, b, c, d = (CycNum.coerce(x) for x in (a, b, c, d))
        m = CycMatrix([[a + b * I, c + d * I], [-c + d * I, a - b * I]])
        q = cls(m)
        if m.det() != 1:
            raise ValueError("quaternion is not a unit")
        return q

    @property
    def coords(self) -> tuple[CycNum, CycNum, CycNum, CycNum]:
        m = self.matrix
        return x_coords(m)

    def __mul__(self, other: "Quat") -> "Quat":
        return Quat(self.matrix @ other.matrix)

    def __neg__(self) -> "Quat":
        return Quat(-self.matrix)

    def inverse(self) -> "Quat":
        m = self.matrix
        return Quat(CycMatrix([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]))

    def conj_entries(self) -> CycMatrix:
        """Entry-wise complex conjugate; this is how sigma(1, p) acts on the second tensor factor."""
        return self.matrix.conj()

    def is_scalar(self) -> bool:
        m = self.matrix
        return m[0, 1].is_zero() and m[1, 0].is_zero() and m[0, 0] == m[1, 1]

    def order(self) -> int:
        p = self
        for k in range(1, CLOSURE_CAP + 1):
            if p.matrix.is_identity():
                return k
            p = p * self
        raise GroupError("quaternion of infinite order")

    def __eq__(self, other) -> bool:
        return isinstance(other, Quat) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)


QUAT_ONE = Quat(CycMatrix.identity(2))


def generators(kind: str) -> list[Quat]:
    half = CycNum.from_rational(1) / 2
    cube = Quat.from_coords(half, half, half, half)
    qi = Quat.from_coords(0, 1, 0, 0)
    if kind == "T":
        return [cube, qi]
    if kind == "O":
        r = ONE / SQRT2
        return [cube, qi, Quat.from_coords(r, r, 0, 0)]
    if kind == "I":
        return [cube, Quat.from_coords(GOLDEN / 2, (GOLDEN - 1) / 2, half, 0)]
    raise ValueError(f"unknown group kind {kind!r}")


@lru_cache(maxsize=None)
def build_binary_group(kind: str) -> tuple[Quat, ...]:
    """Closure of the standard generators of the binary group T~, O~ or I~."""
    gens = generators(kind)
    elements = [QUAT_ONE]
    seen = {QUAT_ONE}
    frontier = [QUAT_ONE]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = p * g
                if q not in seen:
                    seen.add(q)
                    elements.append(q)
                    nxt.append(q)
                    if len(elements) >= CLOSURE_CAP:
                        raise GroupError(f"closure of {kind} generators exceeds {CLOSURE_CAP} elements")
        frontier = nxt
    return tuple(elements)


_HALF = CycNum.from_rational(1) / 2
_MINUS_HALF_I = -I / 2  # 1 / (2i)


def _x_matrix(x) -> CycMatrix:
    x0, x1, x2, x3 = x
    return CycMatrix([[x0 + I * x1, x2 + I * x3], [-x2 + I * x3, x0 - I * x1]])


def x_coords(m: CycMatrix) -> tuple[CycNum, CycNum, CycNum, CycNum]:
    """Inverse of X(x): coordinates x0..x3 of a 2x2 matrix (linear, no conjugation)."""
    return (
        (m[0, 0] + m[1, 1]) * _HALF,
        (m[0, 0] - m[1, 1]) * _MINUS_HALF_I,
        (m[0, 1] - m[1, 0]) * _HALF,
        (m[0, 1] + m[1, 0]) * _MINUS_HALF_I,
    )


def tensor_point(v, w) -> tuple[CycNum, ...]:
    """The point of P3 whose matrix X(x) is the rank-one matrix v w^T."""
    return x_coords(CycMatrix([[v[0] * w[0], v[0] * w[1]], [v[1] * w[0], v[1] * w[1]]]))


_BASIS_X = [
    _x_matrix([ONE if k == j else ZERO for j in range(4)]) for k in range(4)
]


def sigma(p1: Quat, p2: Quat) -> CycMatrix:
    """4x4 matrix of x -> p1 X(x) p2^-1 in the coordinates x0..x3."""
    right = p2.inverse().matrix
    cols = [x_coords(p1.matrix @ bx @ right) for bx in _BASIS_X]
    return CycMatrix([[cols[j][i] for j in range(4)] for i in range(4)])


def quadratic_form(x) -> CycNum:
    return sum((c * c for c in x), ZERO)


def bilinear_form(x, y) -> CycNum:
    return sum((a * b for a, b in zip(x, y)), ZERO)


# --------------------------------------------------------------------------
# projective groups
# --------------------------------------------------------------------------


@dataclass(eq=False)
class GroupElement:
    """sigma(left, right) modulo +-1, with its cached 4x4 matrix."""

    index: int
    left: int
    right: int
    numerators: np.ndarray = field(repr=False)
    group: "FiniteGroup" = field(repr=False)

    @property
    def left_quat(self) -> Quat:
        return self.group.binary[self.left]

    @property
    def right_quat(self) -> Quat:
        return self.group.binary[self.right]

    @property
    def matrix(self) -> CycMatrix:
        return self.group.matrix(self.index)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.multiply(self, other)

    def __repr__(self) -> str:
        return f"GroupElement({self.group.kind}#{self.index}: p{self.left}, p{self.right})"


def _projective_key(arr: np.ndarray) -> bytes:
    flat = arr.reshape(-1)
    nz = np.flatnonzero(flat)
    if nz.size and flat[nz[0]] < 0:
        flat = -flat
    return flat.astype(np.int64).tobytes()


class FiniteGroup:
    """PG_n = sigma(G~ x G~) / {+-1}, stored as deduplicated matrices over (1/4) Z[zeta]."""

    def __init__(self, kind: str):
        if kind not in KINDS:
            raise ValueError(f"unknown group kind {kind!r}")
        self.kind = kind
        self.n = PENCIL_DEGREE[kind]
        self.binary = build_binary_group(kind)
        nb = len(self.binary)
        self._binary_index = {q: i for i, q in enumerate(self.binary)}
        self.binary_mult = np.array(
            [[self._binary_index[p * q] for q in self.binary] for p in self.binary], dtype=np.int64
        )
        self.binary_neg = np.array([self._binary_index[-p] for p in self.binary], dtype=np.int64)
        self.binary_identity = self._binary_index[QUAT_ONE]

        left = np.stack([_half_array(sigma(p, QUAT_ONE)) for p in self.binary])
        right = np.stack([_half_array(sigma(QUAT_ONE, q)) for q in self.binary])

        self.elements: list[GroupElement] = []
        self._index: dict[bytes, int] = {}
        self.pair_index = np.full((nb, nb), -1, dtype=np.int64)
        rows = []
        for i in range(nb):
            prod = kernels.matmul(np.repeat(left[i : i + 1], nb, axis=0), right)
            for j in range(nb):
                key = _projective_key(prod[j])
                idx = self._index.get(key)
                if idx is None:
                    idx = len(self.elements)
                    self._index[key] = idx
                    arr = prod[j].astype(np.int64)
                    self.elements.append(GroupElement(idx, i, j, arr, self))
                    rows.append(arr)
                self.pair_index[i, j] = idx
        self.numerators = np.stack(rows)
        self.order = len(self.elements)
        expected = (BINARY_ORDER[kind] // 2) ** 2
        if self.order != expected:
            raise GroupError(f"|PG| = {self.order}, expected {expected}")
        self.identity = self.pair_index[self.binary_identity, self.binary_identity]
        self._matrices: dict[int, CycMatrix] = {}
        gens = generators(kind)
        self.generators = sorted(
            {
                int(self.pair_index[self._binary_index[g], self.binary_identity])
                for g in gens
            }
            | {int(self.pair_index[self.binary_identity, self._binary_index[g]]) for g in gens}
        )

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def matrix(self, idx: int) -> CycMatrix:
        m = self._matrices.get(idx)
        if m is None:
            m = CycMatrix.from_array(self.numerators[idx], MATRIX_DEN)
            self._matrices[idx] = m
        return m

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        i = self.binary_mult[g.left, h.left]
        j = self.binary_mult[g.right, h.right]
        return self.elements[self.pair_index[i, j]]

    def index_of(self, m: CycMatrix) -> int:
        arr, _ = m.to_array(MATRIX_DEN)
        key = _projective_key(arr)
        if key not in self._index:
            raise KeyError("matrix is not an element of this group")
        return self._index[key]

    def left_factor(self, q: int) -> int:
        """Index of sigma(q, 1)."""
        return int(self.pair_index[q, self.binary_identity])

    def right_factor(self, q: int) -> int:
        """Index of sigma(1, q)."""
        return int(self.pair_index[self.binary_identity, q])


def _half_array(m: CycMatrix) -> np.ndarray:
    # sigma(p, 1) and sigma(1, p) are linear in the quaternion coordinates of p
    arr, _ = m.to_array(MATRIX_DEN // 2)
    return arr.astype(np.int64)


@lru_cache(maxsize=None)
def build_projective_group(kind: str) -> FiniteGroup:
    return FiniteGroup(kind)


def _is_plus_minus_identity(arr: np.ndarray) -> np.ndarray:
    """arr: (N, 4, 4, 32) over MATRIX_DEN; True where the matrix is +-identity."""
    ident = np.zeros((4, 4, kernels.DEGREE), dtype=np.int64)
    for i in range(4):
        ident[i, i, 0] = MATRIX_DEN
    pos = np.all(arr == ident, axis=(1, 2, 3))
    neg = np.all(arr == -ident, axis=(1, 2, 3))
    return pos | neg


def _reduce_product(prod: np.ndarray) -> np.ndarray:
    q, r = np.divmod(prod, MATRIX_DEN)
    if np.any(r != 0):
        raise GroupError("product left (1/4) Z[zeta]; matrices are not group elements")
    return q


def element_orders(group: FiniteGroup, max_order: int = 60) -> np.ndarray:
    """Projective order of every element, by repeated exact matrix multiplication."""
    base = group.numerators
    orders = np.zeros(group.order, dtype=np.int64)
    power = base.copy()
    for k in range(1, max_order + 1):
        done = _is_plus_minus_identity(power) & (orders == 0)
        orders[done] = k
        if np.all(orders > 0):
            return orders
        power = _reduce_product(kernels.matmul(power, base))
    raise GroupError("element of order above the search bound")


def element_order(g: GroupElement, max_order: int = 60) -> int:
    """Smallest k >= 1 with g^k = +-identity."""
    base = g.numerators[None]
    power = base.copy()
    for k in range(1, max_order + 1):
        if _is_plus_minus_identity(power)[0]:
            return k
        power = _reduce_product(kernels.matmul(power, base))
    raise GroupError("element of order above the search bound")


def order_census(group: FiniteGroup) -> Counter:
    return Counter(int(k) for k in element_orders(group))


def binary_order_census(kind: str) -> Counter:
    return Counter(q.order() for q in build_binary_group(kind))
