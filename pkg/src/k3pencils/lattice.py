"""Even integral lattices spanned by (-2)-curves: Gram matrices, determinants, Smith forms, glue.

All arithmetic is over Python integers and ``fractions.Fraction``; nothing
here touches floating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")
SUPPORT_RULE = {2: 8, 3: 12}


class LatticeError(ValueError):
    """Raised for invalid configurations or rejected glue vectors."""


# --------------------------------------------------------------------------
# curve configurations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveConfig:
    """Dual graph of a configuration of smooth rational (-2)-curves."""

    labels: tuple[str, ...]
    edges: frozenset

    def __init__(self, labels: Iterable[str], edges: Iterable[tuple[str, str]]):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise LatticeError("duplicate curve label")
        known = set(labels)
        es = set()
        for a, b in edges:
            if a == b:
                raise LatticeError(f"loop at {a}")
            if a not in known or b not in known:
                raise LatticeError(f"edge {a}-{b} uses an unknown label")
            e = frozenset((a, b))
            if e in es:
                raise LatticeError(f"repeated edge {a}-{b}")
            es.add(e)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", frozenset(es))

    def __len__(self) -> int:
        return len(self.labels)

    def neighbours(self, label: str) -> set[str]:
        return {x for e in self.edges if label in e for x in e if x != label}

    def components(self) -> list[tuple[str, ...]]:
        seen: set[str] = set()
        out = []
        for start in self.labels:
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.neighbours(x):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            order = {lab: i for i, lab in enumerate(self.labels)}
            out.append(tuple(sorted(comp, key=order.__getitem__)))
        return out

    def restrict(self, labels: Sequence[str]) -> "CurveConfig":
        keep = set(labels)
        return CurveConfig(labels, [tuple(e) for e in self.edges if e <= keep])

    def edge_list(self) -> list[tuple[str, str]]:
        order = {lab: i for i, lab in enumerate(self.labels)}
        return sorted((tuple(sorted(e, key=order.__getitem__)) for e in self.edges), key=lambda p: (order[p[0]], order[p[1]]))


def dynkin_type(config: CurveConfig) -> str | None:
    """ADE name of a connected tree of (-2)-curves, or None if it is not one."""
    n = len(config)
    if n == 0 or len(config.edges) != n - 1 or len(config.components()) != 1:
        return None
    deg = {x: len(config.neighbours(x)) for x in config.labels}
    if max(deg.values(), default=0) <= 2:
        return f"A{n}"
    branch = [x for x, d in deg.items() if d >= 3]
    if len(branch) != 1 or deg[branch[0]] != 3:
        return None
    centre = branch[0]
    legs = []
    for start in config.neighbours(centre):
        length, prev, cur = 1, centre, start
        while True:
            nxt = [y for y in config.neighbours(cur) if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return f"D{n}"
    if legs[:2] == [1, 2] and legs[2] in (2, 3, 4):
        return f"E{n}"
    return None


# --------------------------------------------------------------------------
# integer linear algebra
# --------------------------------------------------------------------------


def exact_determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination over Python integers."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return (U, D, V) with U m V = D diagonal, d_1 | d_2 | ..., and U, V unimodular."""
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, "r") for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), j, "c") for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def elementary_divisors(m: Sequence[Sequence[int]]) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def matrix_rank(m: Sequence[Sequence[int]]) -> int:
    return len(elementary_divisors(m)) if m else 0


def row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """A Z-basis (in row echelon form) of the lattice spanned by integer rows."""
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    cols = len(a[0])
    out = []
    r0 = 0
    for c in range(cols):
        while True:
            live = [i for i in range(r0, len(a)) if a[i][c]]
            if len(live) <= 1:
                break
            p = min(live, key=lambda i: abs(a[i][c]))
            for i in live:
                if i != p:
                    q = a[i][c] // a[p][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
        live = [i for i in range(r0, len(a)) if a[i][c]]
        if live:
            i = live[0]
            a[r0], a[i] = a[i], a[r0]
            if a[r0][c] < 0:
                a[r0] = [-x for x in a[r0]]
            out.append(a[r0])
            r0 += 1
    return out


def inertia(m: Sequence[Sequence[int | Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) index of a symmetric matrix by congruence diagonalisation."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # replace e_i by e_i + e_j: new diagonal 2 a_ij
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            piv = i
        # symmetric swap piv <-> k
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


# --------------------------------------------------------------------------
# factorizations
# --------------------------------------------------------------------------


def factorization(n: int) -> dict[int, int]:
    n = abs(int(n))
    if n == 0:
        raise LatticeError("zero has no factorization")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def format_factorization(n: int, signed: bool = False) -> str:
    """'2·3²·5' style string; with signed=True a leading '−' marks negative values."""
    if n == 0:
        return "0"
    parts = [str(p) if e == 1 else f"{p}{str(e).translate(SUPERSCRIPT)}" for p, e in sorted(factorization(n).items())]
    body = "·".join(parts) if parts else "1"
    return ("−" if signed and n < 0 else "") + body


def format_signed(n: int) -> str:
    return f"−{-n}" if n < 0 else str(n)


# --------------------------------------------------------------------------
# lattices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantData:
    determinant: int
    elementary_divisors: tuple[int, ...]
    inertia: tuple[int, int, int]

    @property
    def abs_discriminant(self) -> int:
        return abs(self.determinant)

    @property
    def factored(self) -> str:
        return format_factorization(self.determinant)

    @property
    def group_invariants(self) -> tuple[int, ...]:
        """Invariant factors > 1 of the discriminant group."""
        return tuple(d for d in self.elementary_divisors if d != 1)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)

    def consistent(self) -> bool:
        prod = reduce(lambda x, y: x * y, self.elementary_divisors, 1)
        sign = -1 if self.inertia[1] % 2 else 1
        return prod == abs(self.determinant) and (self.determinant == 0 or sign * prod == self.determinant)


def _pair(gram, x, y) -> Fraction:
    return sum((Fraction(x[i]) * gram[i][j] * Fraction(y[j]) for i in range(len(x)) if x[i] for j in range(len(y)) if y[j]), Fraction(0))


@dataclass
class IntLattice:
    """Z-span of the curve basis plus rational glue vectors, with the ambient curve pairing."""

    gram: list[list[int]]
    basis_labels: list[str]
    glue: list[tuple[Fraction, ...]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.gram)
        if any(len(r) != n for r in self.gram) or len(self.basis_labels) != n:
            raise LatticeError("gram matrix and labels disagree in size")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram matrix is not symmetric")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def vector(self, coeffs: dict[str, int | Fraction], divisor: int = 1) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * self.dim
        for lab, c in coeffs.items():
            v[self.index(lab)] += Fraction(c, divisor)
        return tuple(v)

    def pair(self, x, y) -> Fraction:
        if len(x) != self.dim or len(y) != self.dim:
            raise LatticeError("dimension mismatch")
        return _pair(self.gram, x, y)

    def generators(self) -> list[tuple[Fraction, ...]]:
        basis = [tuple(Fraction(int(i == j)) for j in range(self.dim)) for i in range(self.dim)]
        return basis + list(self.glue)

    def basis(self) -> list[tuple[Fraction, ...]]:
        """A Z-basis of the lattice (rational coordinates in the curve basis)."""
        gens = self.generators()
        d = lcm(*(x.denominator for g in gens for x in g)) if gens else 1
        rows = row_basis([[int(x * d) for x in g] for g in gens])
        return [tuple(Fraction(x, d) for x in r) for r in rows]

    def gram_matrix(self) -> list[list[int]]:
        b = self.basis()
        out = []
        for x in b:
            row = []
            for y in b:
                v = self.pair(x, y)
                if v.denominator != 1:
                    raise LatticeError("lattice is not integral")
                row.append(int(v))
            out.append(row)
        return out

    def is_even(self) -> bool:
        return all(self.pair(g, g).denominator == 1 and int(self.pair(g, g)) % 2 == 0 for g in self.generators())

    def is_integral(self) -> bool:
        gens = self.generators()
        return all(self.pair(x, y).denominator == 1 for x in gens for y in gens)

    def discriminant(self) -> DiscriminantData:
        g = self.gram_matrix()
        return DiscriminantData(exact_determinant(g), tuple(elementary_divisors(g)), inertia(g))

    def contains(self, x) -> bool:
        """Membership of a rational vector in the Z-span."""
        b = self.basis()
        d = lcm(*(v.denominator for r in b for v in r), *(Fraction(v).denominator for v in x))
        rows = [[int(v * d) for v in r] for r in b]
        return _in_span(rows, [int(Fraction(v) * d) for v in x])


def _pivot_volume(rows: list[list[int]]) -> tuple[int, int]:
    ech = row_basis(rows)
    vol = 1
    for r in ech:
        vol *= next(x for x in r if x)
    return len(ech), abs(vol)


def _in_span(rows: list[list[int]], x: list[int]) -> bool:
    """x lies in the Z-span of rows iff adding it changes neither rank nor covolume."""
    return _pivot_volume(rows) == _pivot_volume(rows + [x])


def gram_from_config(c: CurveConfig) -> IntLattice:
    idx = {lab: i for i, lab in enumerate(c.labels)}
    n = len(c.labels)
    gram = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for e in c.edges:
        a, b = tuple(e)
        gram[idx[a]][idx[b]] = gram[idx[b]][idx[a]] = 1
    return IntLattice(gram, list(c.labels))


def dual_membership(x: Sequence, lattice: IntLattice) -> bool:
    """True iff x pairs integrally with every generator (basis curves and glue)."""
    if len(x) != lattice.dim:
        raise LatticeError("dimension mismatch")
    return all(lattice.pair(x, g).denominator == 1 for g in lattice.generators())


def extend_by_glue(lattice: IntLattice, vs: Iterable[Sequence]) -> IntLattice:
    """Even overlattice spanned by the lattice and the glue vectors vs."""
    out = IntLattice([row[:] for row in lattice.gram], list(lattice.basis_labels), list(lattice.glue))
    for v in vs:
        v = tuple(Fraction(x) for x in v)
        if len(v) != out.dim:
            raise LatticeError("dimension mismatch")
        if not dual_membership(v, out):
            raise LatticeError("glue vector has a non-integral pairing")
        sq = out.pair(v, v)
        if sq.denominator != 1 or int(sq) % 2:
            raise LatticeError(f"glue vector has odd or fractional square {sq}")
        if not out.contains(v):
            out.glue.append(v)
    return out


@dataclass(frozen=True)
class DivisibilityCheck:
    ok: bool
    support: int
    required_support: int
    integral: bool
    square: Fraction
    reasons: tuple[str, ...]


def check_divisible_class(c: Sequence[int], p: int, lattice: IntLattice) -> DivisibilityCheck:
    """Necessary conditions for c/p to lie in an even overlattice, plus the support rule."""
    if p not in SUPPORT_RULE:
        raise LatticeError(f"no support rule for p = {p}")
    if any(x not in (0, 1, -1) for x in c):
        raise LatticeError("coefficients must lie in {0, 1, -1}")
    v = tuple(Fraction(x, p) for x in c)
    reasons = []
    integral = dual_membership(v, lattice)
    if not integral:
        reasons.append("non-integral pairing with a generator")
    sq = lattice.pair(v, v)
    if sq.denominator != 1 or int(sq) % 2:
        reasons.append(f"square {sq} is not an even integer")
    support = sum(1 for x in c if x)
    need = SUPPORT_RULE[p]
    if support != need:
        reasons.append(f"support {support} differs from {need}")
    return DivisibilityCheck(not reasons, support, need, integral, sq, tuple(reasons))


def direct_sum_determinant(config: CurveConfig) -> int:
    """Product of the determinants of the connected components."""
    out = 1
    for comp in config.components():
        out *= exact_determinant(gram_from_config(config.restrict(comp)).gram)
    return out


def search_divisible_classes(lattice: IntLattice, p: int, support: int | None = None) -> list[tuple[int, ...]]:
    """All {0, +-1} vectors c (up to sign) with c/p pairing integrally and evenly, of the given support.

    The candidates are the lifts of the kernel of the Gram matrix modulo p.
    """
    support = SUPPORT_RULE[p] if support is None else support
    kernel = _kernel_mod_p([[x % p for x in row] for row in lattice.gram], p)
    found = set()
    dim = len(kernel)
    for coeffs in _all_vectors(dim, p):
        if not any(coeffs):
            continue
        vec = [sum(c * k[i] for c, k in zip(coeffs, kernel)) % p for i in range(lattice.dim)]
        lifted = tuple(x if x <= p // 2 else x - p for x in vec)
        if sum(1 for x in lifted if x) != support:
            continue
        first = next(x for x in lifted if x)
        if first < 0:
            lifted = tuple(-x for x in lifted)
        if check_divisible_class(lifted, p, lattice).ok:
            found.add(lifted)
    return sorted(found, reverse=True)


def _all_vectors(dim: int, p: int):
    if dim == 0:
        yield ()
        return
    for head in range(p):
        for tail in _all_vectors(dim - 1, p):
            yield (head,) + tail


def _kernel_mod_p(m: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of m over F_p."""
    a = [row[:] for row in m]
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-a[i][f]) % p
        basis.append(v)
    return basis


def block_determinants(config: CurveConfig, prefixes: Iterable[str]) -> dict[str, int]:
    """Determinant of the sub-lattice spanned by curves whose label starts with each prefix."""
    out = {}
    for pre in prefixes:
        labs = [x for x in config.labels if x.rstrip("0123456789′") == pre]
        if labs:
            out[pre] = exact_determinant(gram_from_config(config.restrict(labs)).gram)
    return out


def label_counter(labels: Iterable[str]) -> Counter:
    return Counter(x.rstrip("0123456789′") for x in labels)
