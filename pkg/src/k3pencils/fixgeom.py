"""Fix-lines and fix-points of PG_n on P3, their orbits, stabilizers and quotient singularities.

Every fix-line and every fix-point on the quadric q = 0 is a tensor
v (x) w of eigenvectors of the two quaternion factors, so the whole
census is driven by the finite set of eigenpoints in P1 together with
permutation tables for the action of G~ on them.  Matrices in P3 are used
to cross-check the outcome (direct stabilizers, tangent eigenvalues).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from .cyclofield import ONE, ZERO, CycMatrix, CycNum, solve_kernel, to_array, zeta
from .groups import (
    KIND_OF_DEGREE,
    MATRIX_DEN,
    FiniteGroup,
    bilinear_form,
    build_projective_group,
    element_orders,
    quadratic_form,
    tensor_point,
)

TYPE_LETTER = {2: "M", 3: "N", 4: "R", 5: "S"}
BASE_FIX_ORDER = {6: 2, 8: 3, 12: 5}
_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class GeometryError(RuntimeError):
    """The fix-point census contradicts itself (matrix or bookkeeping fault)."""


# --------------------------------------------------------------------------
# projective helpers
# --------------------------------------------------------------------------


def normalize(vec) -> tuple[CycNum, ...]:
    """Scale a nonzero vector so that its first nonzero entry is 1."""
    for c in vec:
        if not c.is_zero():
            if c == ONE:
                return tuple(vec)
            inv = c.inv()
            return tuple(x * inv for x in vec)
    raise ValueError("zero vector has no projective point")


def pluecker(a, b) -> tuple[CycNum, ...]:
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in _PAIRS)


def pluecker_pairing(p, q) -> CycNum:
    """Zero iff the two lines meet (or coincide)."""
    return p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0]


def root_order(x: CycNum) -> int:
    """Multiplicative order of a 120th root of unity."""
    k = _ROOT_LOG.get(x)
    if k is None:
        raise ValueError("not a 120th root of unity")
    return 120 // np.gcd(k, 120) if k else 1


_ROOT_LOG = {zeta(k): k for k in range(120)}


@dataclass(frozen=True, eq=False)
class ProjLine:
    """Line in P3 with canonical Pluecker coordinates."""

    pluecker: tuple
    span: tuple

    @classmethod
    def through(cls, a, b) -> "ProjLine":
        p = pluecker(a, b)
        if all(c.is_zero() for c in p):
            raise ValueError("points do not span a line")
        return cls(normalize(p), (tuple(a), tuple(b)))

    @cached_property
    def on_quadric(self) -> bool:
        a, b = self.span
        return quadratic_form(a).is_zero() and quadratic_form(b).is_zero() and bilinear_form(a, b).is_zero()

    def contains(self, x) -> bool:
        p = dict(zip(_PAIRS, self.pluecker))
        for i, j, k in combinations(range(4), 3):
            if not (x[i] * p[j, k] - x[j] * p[i, k] + x[k] * p[i, j]).is_zero():
                return False
        return True

    def meets(self, other: "ProjLine") -> bool:
        return pluecker_pairing(self.pluecker, other.pluecker).is_zero()

    def intersection(self, other: "ProjLine"):
        """Common point of two distinct coplanar lines, or None."""
        a, b = self.span
        c, d = other.span
        m = CycMatrix([[a[r], b[r], c[r], d[r]] for r in range(4)])
        ker = solve_kernel(m)
        if len(ker) != 1:
            return None
        s, t = ker[0][0], ker[0][1]
        return normalize([s * a[r] + t * b[r] for r in range(4)])

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjLine) and self.pluecker == other.pluecker

    def __hash__(self) -> int:
        return hash(self.pluecker)

    def sort_key(self) -> tuple:
        return tuple(c.sort_key() for c in self.pluecker)


def _eigenvector(m: CycMatrix, mu: CycNum) -> tuple[CycNum, CycNum]:
    if not m[0, 1].is_zero():
        v = (m[0, 1], mu - m[0, 0])
    elif not m[1, 0].is_zero():
        v = (mu - m[1, 1], m[1, 0])
    else:
        v = (ONE, ZERO) if m[0, 0] == mu else (ZERO, ONE)
    return normalize(v)


def _root_index(trace: CycNum) -> int:
    for k in range(61):
        if zeta(k) + zeta(-k) == trace:
            return k
    raise GeometryError("trace is not of the form zeta^k + zeta^-k")


# --------------------------------------------------------------------------
# records
# --------------------------------------------------------------------------


@dataclass
class FixLineOrbit:
    representative: ProjLine
    length: int
    fix_group_order: int
    stabilizer_order: int
    type_label: str
    kind: str  # "off", "left" or "right"
    members: list = field(repr=False, default_factory=list)
    generator: int = -1

    @property
    def order(self) -> int:
        return self.fix_group_order

    @property
    def general_orbit_length(self) -> int:
        return self.stabilizer_order // self.fix_group_order


@dataclass(frozen=True)
class GroupId:
    family: str  # "Z", "D", "Z2xZ2", "T", "O", "I"
    order: int

    @property
    def label(self) -> str:
        if self.family == "Z":
            return f"Z{self.order}"
        if self.family == "D":
            return f"D{self.order // 2}"
        return self.family


@dataclass
class FixPointRecord:
    point: tuple
    stabilizer_structure: GroupId
    meeting_lines: Counter
    singularity: str
    orbit_length: int
    stabilizer: list = field(repr=False, default_factory=list)


@dataclass(frozen=True)
class BasePointOrbit:
    """G~-orbit of points on a base-locus line with cyclic Z_t stabilizer in the other factor."""

    t: int
    length: int
    crossing: bool
    singularity: str


# --------------------------------------------------------------------------
# group identification and ADE rules
# --------------------------------------------------------------------------


def identify_group(orders) -> GroupId:
    """Name a finite subgroup of SO(3) from the multiset of its element orders."""
    orders = list(orders)
    size = len(orders)
    top = max(orders)
    inv = orders.count(2)
    if top == size:
        return GroupId("Z", size)
    if size == 4 and top == 2:
        return GroupId("Z2xZ2", 4)
    if size == 2 * top and inv == (top + 1 if top % 2 == 0 else top):
        return GroupId("D", size)
    if size == 12 and top == 3:
        return GroupId("T", 12)
    if size == 24 and top == 4 and 6 not in orders:
        return GroupId("O", 24)
    if size == 60 and top == 5:
        return GroupId("I", 60)
    raise ValueError(f"unrecognised group of order {size} with orders {sorted(set(orders))}")


def node_resolution_type(f: GroupId | str) -> str:
    """Dynkin type resolving C^2 / (binary cover of F)."""
    if isinstance(f, str):
        f = _parse_group_label(f)
    if f.family == "Z":
        return f"A{2 * f.order - 1}"
    if f.family == "D":
        return f"D{f.order // 2 + 2}"
    return {"Z2xZ2": "D4", "T": "E6", "O": "E7", "I": "E8"}[f.family]


def _parse_group_label(label: str) -> GroupId:
    label = label.replace("×", "x").replace(" ", "")
    if label in ("Z2xZ2", "V4"):
        return GroupId("Z2xZ2", 4)
    if label in ("T", "O", "I"):
        return GroupId(label, {"T": 12, "O": 24, "I": 60}[label])
    if label[:1] == "Z" and label[1:].isdigit():
        return GroupId("Z", int(label[1:]))
    if label[:1] == "D" and label[1:].isdigit():
        return GroupId("D", 2 * int(label[1:]))
    raise ValueError(f"unknown group id {label!r}")


def cyclic_quotient_type(e1: CycNum, e2: CycNum) -> str:
    """ADE label of C^2 / <diag(e1, e2)> for roots of unity with e1 e2 = 1."""
    if e1 == ONE and e2 == ONE:
        return "smooth"
    if not (e1 * e2 == ONE):
        raise ValueError("cyclic action is not in SL(2)")
    return f"A{root_order(e1) - 1}"


def classify_base_point(n: int, s: int, t: int) -> str:
    """Quotient singularity at a base-locus point with stabilizer Z_s x Z_t."""
    if BASE_FIX_ORDER.get(n) != s:
        raise ValueError(f"s = {s} does not belong to degree {n}")
    if t == s:
        return "smooth"
    # residual Z_t action on (z1^s, z2) is (zeta_t^s, zeta_t)
    if t < 2 or (s + 1) % t:
        raise ValueError(f"(s, t) = ({s}, {t}) does not occur")
    return f"A{t - 1}"


def classify_line_point(orbit: FixLineOrbit) -> str:
    if orbit.kind != "off":
        raise ValueError("expected a fix-line off the quadric")
    return f"A{orbit.fix_group_order - 1}"


# --------------------------------------------------------------------------
# the census
# --------------------------------------------------------------------------


class FixGeometry:
    """All fix-lines, base points and nodes for one group PG_n."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.n = group.n
        self.s = BASE_FIX_ORDER[self.n]
        nb = len(group.binary)
        self.nb = nb

        # eigen data: index k with eigenvalue zeta^k on the first eigenpoint
        self.left_points: list[tuple] = []
        self.right_points: list[tuple] = []
        left_ix: dict = {}
        right_ix: dict = {}
        self.left_eigen: list = []
        self.right_eigen: list = []
        for q in group.binary:
            self.left_eigen.append(self._eigen(q.matrix, self.left_points, left_ix))
            self.right_eigen.append(self._eigen(q.matrix.conj(), self.right_points, right_ix))
        self.left_perm = self._perm_table(left_ix, self.left_points, conj=False)
        self.right_perm = self._perm_table(right_ix, self.right_points, conj=True)
        self._scan_elements()

    # -- eigenpoints -------------------------------------------------------

    @staticmethod
    def _eigen(m: CycMatrix, points: list, index: dict):
        k = _root_index(m.trace())
        if k in (0, 60):
            return None
        ids = []
        for mu in (zeta(k), zeta(-k)):
            v = _eigenvector(m, mu)
            if v not in index:
                index[v] = len(points)
                points.append(v)
            ids.append(index[v])
        return k, ids[0], ids[1]

    def _perm_table(self, index: dict, points: list, conj: bool) -> np.ndarray:
        g = self.group
        table = np.full((self.nb, len(points)), -1, dtype=np.int64)
        table[g.binary_identity] = np.arange(len(points))
        gens = sorted({g.elements[e].left for e in g.generators} | {g.elements[e].right for e in g.generators})
        gens = [x for x in gens if x != g.binary_identity]
        for x in gens:
            m = g.binary[x].matrix
            if conj:
                m = m.conj()
            for a, v in enumerate(points):
                img = normalize(m.apply(v))
                if img not in index:
                    raise GeometryError("eigenpoints are not permuted by the group")
                table[x, a] = index[img]
        # extend multiplicatively: perm(p g) = perm(p) o perm(g)
        frontier = [g.binary_identity]
        done = {g.binary_identity}
        while frontier:
            nxt = []
            for p in frontier:
                for x in gens:
                    pg = int(g.binary_mult[p, x])
                    if pg not in done:
                        table[pg] = table[p][table[x]]
                        done.add(pg)
                        nxt.append(pg)
            frontier = nxt
        if len(done) != self.nb:
            raise GeometryError("generators do not reach every binary element")
        return table

    # -- lines -------------------------------------------------------------

    def _scan_elements(self) -> None:
        g = self.group
        self.line_fixers: dict[tuple, list[int]] = defaultdict(list)
        self.element_lines: list[list[tuple]] = [[] for _ in range(g.order)]
        for el in g.elements:
            le = self.left_eigen[el.left]
            re = self.right_eigen[el.right]
            keys = []
            if le is None and re is None:
                continue
            if re is None:
                keys = [("left", le[1]), ("left", le[2])]
            elif le is None:
                keys = [("right", re[1]), ("right", re[2])]
            else:
                a, v, v2 = le
                b, w, w2 = re
                if (2 * (a + b)) % 120 == 0:
                    keys.append(_off_key((v, w), (v2, w2)))
                if (2 * (a - b)) % 120 == 0:
                    keys.append(_off_key((v, w2), (v2, w)))
            for key in keys:
                self.line_fixers[key].append(el.index)
                self.element_lines[el.index].append(key)

    def _apply_key(self, elem: int, key):
        el = self.group.elements[elem]
        lp, rp = self.left_perm[el.left], self.right_perm[el.right]
        if key[0] == "left":
            return ("left", int(lp[key[1]]))
        if key[0] == "right":
            return ("right", int(rp[key[1]]))
        (a, b), (a2, b2) = key[1], key[2]
        return _off_key((int(lp[a]), int(rp[b])), (int(lp[a2]), int(rp[b2])))

    def stabilizer_of_key(self, key) -> np.ndarray:
        """Indices of all h in PG_n with hL = L, by the permutation tables."""
        g = self.group
        lefts = np.array([e.left for e in g.elements])
        rights = np.array([e.right for e in g.elements])
        lp = self.left_perm[lefts]
        rp = self.right_perm[rights]
        if key[0] == "left":
            mask = lp[:, key[1]] == key[1]
        elif key[0] == "right":
            mask = rp[:, key[1]] == key[1]
        else:
            (a, b), (a2, b2) = key[1], key[2]
            i1, j1, i2, j2 = lp[:, a], rp[:, b], lp[:, a2], rp[:, b2]
            same = (i1 == a) & (j1 == b) & (i2 == a2) & (j2 == b2)
            swap = (i1 == a2) & (j1 == b2) & (i2 == a) & (j2 == b)
            mask = same | swap
        return np.flatnonzero(mask)

    def line(self, key) -> ProjLine:
        return self._line(key)

    @lru_cache(maxsize=None)
    def _line(self, key) -> ProjLine:
        e0, e1 = (ONE, ZERO), (ZERO, ONE)
        if key[0] == "left":
            v = self.left_points[key[1]]
            return ProjLine.through(tensor_point(v, e0), tensor_point(v, e1))
        if key[0] == "right":
            w = self.right_points[key[1]]
            return ProjLine.through(tensor_point(e0, w), tensor_point(e1, w))
        (a, b), (a2, b2) = key[1], key[2]
        return ProjLine.through(
            tensor_point(self.left_points[a], self.right_points[b]),
            tensor_point(self.left_points[a2], self.right_points[b2]),
        )

    def _orbit_of_key(self, key) -> list:
        gens = self.group.generators
        seen = {key}
        frontier = [key]
        while frontier:
            nxt = []
            for k in frontier:
                for x in gens:
                    img = self._apply_key(x, k)
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return sorted(seen)

    @cached_property
    def line_orbits(self) -> list[FixLineOrbit]:
        order = self.group.order
        remaining = set(self.line_fixers)
        raw = []
        while remaining:
            key = min(remaining)
            members = self._orbit_of_key(key)
            missing = [m for m in members if m not in self.line_fixers]
            if missing:
                raise GeometryError("orbit of a fix-line contains a non-fix-line")
            remaining.difference_update(members)
            lines = sorted((self.line(m) for m in members), key=ProjLine.sort_key)
            rep_line = lines[0]
            rep_key = next(m for m in members if self.line(m) == rep_line)
            fixers = self.line_fixers[rep_key]
            f_order = len(fixers) + 1
            stab = len(self.stabilizer_of_key(rep_key))
            if stab * len(members) != order:
                raise GeometryError("orbit-stabilizer violated for a fix-line")
            if rep_key[0] == "off" and rep_line.on_quadric:
                raise GeometryError("off-quadric key produced a quadric line")
            raw.append(
                FixLineOrbit(
                    representative=rep_line,
                    length=len(members),
                    fix_group_order=f_order,
                    stabilizer_order=stab,
                    type_label="",
                    kind=rep_key[0],
                    members=members,
                    generator=fixers[0],
                )
            )
        _assign_labels(raw)
        kind_rank = {"left": 0, "right": 1, "off": 2}
        raw.sort(key=lambda o: (kind_rank[o.kind], o.fix_group_order, -o.length, o.type_label))
        return raw

    def off_quadric_orbits(self) -> list[FixLineOrbit]:
        return [o for o in self.line_orbits if o.kind == "off"]

    def ruling_orbits(self, side: str = "left") -> list[FixLineOrbit]:
        return [o for o in self.line_orbits if o.kind == side]

    def base_locus(self) -> list[FixLineOrbit]:
        """The two ruling orbits of length n with fix-group Z_s, one per ruling."""
        found = [
            o
            for o in self.line_orbits
            if o.kind in ("left", "right") and o.fix_group_order == self.s and o.length == self.n
        ]
        if sorted(o.kind for o in found) != ["left", "right"]:
            raise GeometryError("base locus is not one orbit per ruling")
        return found

    @cached_property
    def base_points(self) -> tuple[set, set]:
        left, right = (o for o in sorted(self.base_locus(), key=lambda o: o.kind))
        return {k[1] for k in left.members}, {k[1] for k in right.members}

    # -- base points -------------------------------------------------------

    def _binary_stabilizer(self, perm: np.ndarray, a: int) -> np.ndarray:
        return np.flatnonzero(perm[:, a] == a)

    def base_point_orbits(self) -> list[BasePointOrbit]:
        """G~-orbits of points v (x) w on one base line Lambda = v (x) C^2."""
        _, base_right = self.base_points
        seen: set = set()
        out = []
        for b in range(len(self.right_points)):
            if b in seen:
                continue
            orbit = set(int(x) for x in self.right_perm[:, b])
            seen |= orbit
            t = len(self._binary_stabilizer(self.right_perm, b)) // 2
            crossing = b in base_right
            if crossing != (t == self.s):
                raise GeometryError("crossing points do not match the base locus")
            out.append(BasePointOrbit(t, len(orbit), crossing, classify_base_point(self.n, self.s, t)))
        out.sort(key=lambda o: (o.t, o.length))
        return out

    def base_point_census(self) -> dict[int, int]:
        """t -> number of H_Lambda-orbits of Z_s x Z_t points on a base line."""
        return dict(Counter(o.t for o in self.base_point_orbits()))

    def trace_base_point(self, t: int) -> str:
        """Quotient singularity at a Z_s x Z_t base point, from the actual tangent eigenvalues."""
        g = self.group
        base_left, base_right = self.base_points
        a = min(base_left)
        b = next(
            b
            for b in range(len(self.right_points))
            if len(self._binary_stabilizer(self.right_perm, b)) // 2 == t
        )
        p1 = self._cyclic_generator(self.left_perm, self.left_eigen, a)
        p2 = self._cyclic_generator(self.right_perm, self.right_eigen, b)
        a2 = self._partner(self.left_eigen[p1], a)
        b2 = self._partner(self.right_eigen[p2], b)
        v, v2 = self.left_points[a], self.left_points[a2]
        w, w2 = self.right_points[b], self.right_points[b2]
        gs = g.matrix(g.left_factor(p1))
        gt = g.matrix(g.right_factor(p2))
        if t == self.s:
            # X contains both rulings through v (x) w; each generator is a reflection
            frame = [tensor_point(v, w), tensor_point(v, w2), tensor_point(v2, w)]
            es = _relative_eigenvalues(gs, frame)
            et = _relative_eigenvalues(gt, frame)
            if es[0] != ONE or et[1] != ONE or es[1] == ONE or et[0] == ONE:
                raise GeometryError("crossing point generators are not reflections in the two lines")
            return "smooth"
        frame = [tensor_point(v, w), tensor_point(v, w2), tensor_point(v2, w2)]
        es = _relative_eigenvalues(gs, frame)
        et = _relative_eigenvalues(gt, frame)
        moving = [k for k in range(2) if es[k] != ONE]
        if len(moving) != 1:
            raise GeometryError("Z_s does not act as a reflection on the tangent plane")
        r = moving[0]
        order_s = root_order(es[r])
        residual = [et[k] ** order_s if k == r else et[k] for k in range(2)]
        return cyclic_quotient_type(*residual)

    def _cyclic_generator(self, perm, eigen, a: int) -> int:
        stab = self._binary_stabilizer(perm, a)
        best = max(stab, key=lambda x: (0 if eigen[x] is None else 120 // np.gcd(eigen[x][0], 120), -x))
        return int(best)

    @staticmethod
    def _partner(eig, a: int) -> int:
        _, x, y = eig
        if a == x:
            return y
        if a == y:
            return x
        raise GeometryError("point is not an eigenpoint of its stabilizer generator")

    # -- points on off-quadric lines -------------------------------------

    def quadric_points(self, key) -> list[tuple[int, int]]:
        return [key[1], key[2]]

    def base_hits(self, key) -> int:
        """How many of the two quadric points of an off-quadric fix-line lie on the base locus."""
        base_left, base_right = self.base_points
        return sum(1 for a, b in self.quadric_points(key) if a in base_left or b in base_right)

    def line_orbit_census(self, orbit: FixLineOrbit) -> tuple[int, int]:
        """(length, number) of H_L-orbits of X cap L off the quadric."""
        if orbit.kind != "off":
            raise ValueError("expected a fix-line off the quadric")
        key = orbit.members[0]
        points = self.n - self.base_hits(key)
        length = orbit.general_orbit_length
        number, rem = divmod(points, length)
        if rem:
            raise GeometryError(f"{points} points do not split into orbits of length {length}")
        return length, number

    def trace_line_point(self, orbit: FixLineOrbit) -> str:
        """Tangent eigenvalues of the F_L generator at a general point x of L, relative to x."""
        key = orbit.members[0]
        (a, b), (a2, b2) = key[1], key[2]
        gen = max(self.line_fixers[key], key=lambda e: (self.element_order(e), -e))
        v, v2 = self.left_points[a], self.left_points[a2]
        w, w2 = self.right_points[b], self.right_points[b2]
        p, p2 = tensor_point(v, w), tensor_point(v2, w2)
        x = tuple(p[i] + p2[i] for i in range(4))
        frame = [x, tensor_point(v, w2), tensor_point(v2, w)]
        e = _relative_eigenvalues(self.group.matrix(gen), frame)
        return cyclic_quotient_type(*e)

    @cached_property
    def _orders(self) -> np.ndarray:
        return element_orders(self.group)

    def element_order(self, idx: int) -> int:
        return int(self._orders[idx])

    # -- nodes -------------------------------------------------------------

    def point_stabilizer(self, x) -> np.ndarray:
        g = self.group
        arr, _ = to_array(list(x))
        vecs = np.broadcast_to(arr, (g.order, 4, kernels.DEGREE))
        images = kernels.matvec(g.numerators, vecs)
        return np.flatnonzero(kernels.proportional_rows(images, np.asarray(vecs, dtype=images.dtype)))

    def same_orbit(self, x, y) -> bool:
        g = self.group
        ax, _ = to_array(list(x))
        ay, _ = to_array(list(y))
        images = kernels.matvec(g.numerators, np.broadcast_to(ax, (g.order, 4, kernels.DEGREE)))
        target = np.broadcast_to(ay, (g.order, 4, kernels.DEGREE)).astype(images.dtype)
        return bool(kernels.proportional_rows(images, target).any())

    @cached_property
    def node_orbits(self) -> list[FixPointRecord]:
        off = self.off_quadric_orbits()
        all_keys = [k for o in off for k in o.members]
        candidates = []
        for orbit in off:
            rep = orbit.representative
            for k in all_keys:
                other = self.line(k)
                if other == rep or not rep.meets(other):
                    continue
                x = rep.intersection(other)
                if x is None or quadratic_form(x).is_zero():
                    continue
                if x not in candidates:
                    candidates.append(x)
        reps: list = []
        for x in candidates:
            if not any(self.same_orbit(r, x) for r in reps):
                reps.append(x)
        labels = {k: o.type_label for o in off for k in o.members}
        records = []
        for x in reps:
            stab = self.point_stabilizer(x)
            gid = identify_group(self.element_order(int(i)) for i in stab)
            through = set()
            for e in stab:
                for k in self.element_lines[int(e)]:
                    if k in labels and self.line(k).contains(x):
                        through.add(k)
            meeting = Counter(labels[k] for k in through)
            records.append(
                FixPointRecord(
                    point=x,
                    stabilizer_structure=gid,
                    meeting_lines=meeting,
                    singularity=node_resolution_type(gid),
                    orbit_length=self.group.order // len(stab),
                    stabilizer=[int(i) for i in stab],
                )
            )
        records.sort(key=lambda r: (r.orbit_length, r.stabilizer_structure.label, sorted(r.meeting_lines.items())))
        return records

    def line_node_family(self, orbit: FixLineOrbit) -> FixPointRecord:
        """A general point of an off-quadric fix-line, as a node candidate on that line alone.

        Its stabilizer is F_L itself, so the orbit has |PG_n| / |F_L| points.
        """
        if orbit.kind != "off":
            raise ValueError("expected a fix-line off the quadric")
        key = orbit.members[0]
        (a, b), (a2, b2) = key[1], key[2]
        p = tensor_point(self.left_points[a], self.right_points[b])
        p2 = tensor_point(self.left_points[a2], self.right_points[b2])
        for c in range(1, 8):
            x = tuple(p[i] + c * p2[i] for i in range(4))
            if quadratic_form(x).is_zero():
                continue
            stab = self.point_stabilizer(x)
            if len(stab) == orbit.fix_group_order:
                gid = identify_group(self.element_order(int(i)) for i in stab)
                return FixPointRecord(
                    point=x,
                    stabilizer_structure=gid,
                    meeting_lines=Counter({orbit.type_label: 1}),
                    singularity=node_resolution_type(gid),
                    orbit_length=self.group.order // len(stab),
                    stabilizer=[int(i) for i in stab],
                )
        raise GeometryError(f"no general point found on {orbit.type_label}")

    def node_candidates(self) -> list[FixPointRecord]:
        """Intersection orbits followed by one general-point family per off-quadric type."""
        return list(self.node_orbits) + [self.line_node_family(o) for o in self.off_quadric_orbits()]

    # -- direct matrix checks -------------------------------------------

    def line_stabilizer_direct(self, line: ProjLine) -> int:
        """|H_L| by applying every group matrix to the spanning points of L."""
        g = self.group
        hits = np.ones(g.order, dtype=bool)
        for pt in line.span:
            arr, _ = to_array(list(pt))
            images = kernels.matvec(g.numerators, np.broadcast_to(arr, (g.order, 4, kernels.DEGREE)))
            hits &= _on_line_batch(line, images)
        return int(hits.sum())


def _on_line_batch(line: ProjLine, images: np.ndarray) -> np.ndarray:
    """images: (N, 4, 32) numerators; True where the point lies on the line."""
    parr, _ = to_array(list(line.pluecker))
    p = dict(zip(_PAIRS, parr))
    n = images.shape[0]
    ok = np.ones(n, dtype=bool)
    for i, j, k in combinations(range(4), 3):
        terms = [
            kernels.polymul(images[:, i], np.broadcast_to(p[j, k], (n, kernels.DEGREE)).astype(images.dtype)),
            kernels.polymul(images[:, j], np.broadcast_to(p[i, k], (n, kernels.DEGREE)).astype(images.dtype)),
            kernels.polymul(images[:, k], np.broadcast_to(p[i, j], (n, kernels.DEGREE)).astype(images.dtype)),
        ]
        val = terms[0] - terms[1] + terms[2]
        ok &= ~np.any(val != 0, axis=1)
    return ok


def _relative_eigenvalues(m: CycMatrix, frame) -> list[CycNum]:
    """Eigenvalues of m on frame[1], frame[2] divided by the eigenvalue on frame[0]."""
    mus = []
    for y in frame:
        img = m.apply(y)
        k = next(i for i in range(4) if not y[i].is_zero())
        mu = img[k] / y[k]
        if any(not (img[i] - mu * y[i]).is_zero() for i in range(4)):
            raise GeometryError("frame vector is not an eigenvector")
        mus.append(mu)
    base = mus[0].inv()
    return [mus[1] * base, mus[2] * base]


def _off_key(p, q):
    p, q = sorted((tuple(p), tuple(q)))
    return ("off", p, q)


def _assign_labels(orbits: list[FixLineOrbit]) -> None:
    for o in orbits:
        if o.kind != "off":
            o.type_label = f"ruling-{o.kind}"
    by_letter: dict[str, list[FixLineOrbit]] = defaultdict(list)
    for o in orbits:
        if o.kind == "off":
            if o.fix_group_order not in TYPE_LETTER:
                raise GeometryError(f"fix-line of unexpected order {o.fix_group_order}")
            by_letter[TYPE_LETTER[o.fix_group_order]].append(o)
    for letter, group in by_letter.items():
        classes: dict[tuple, list[FixLineOrbit]] = defaultdict(list)
        for o in group:
            classes[(o.length, o.general_orbit_length)].append(o)
        for members in classes.values():
            members.sort(key=lambda o: o.representative.sort_key())
            if len(members) == 1:
                members[0].type_label = letter
            elif len(members) == 2:
                members[0].type_label = letter + "′"
                members[1].type_label = letter + "″"
            else:
                raise GeometryError(f"{len(members)} indistinguishable orbits of type {letter}")
        plain = [o for o in group if o.type_label == letter]
        if len(plain) > 1:
            raise GeometryError(f"several distinct orbits of type {letter}")


@lru_cache(maxsize=None)
def geometry(n: int) -> FixGeometry:
    return FixGeometry(build_projective_group(KIND_OF_DEGREE[n]))


def fix_lines(group: FiniteGroup) -> list[FixLineOrbit]:
    return geometry(group.n).line_orbits


def base_locus(group: FiniteGroup) -> list[FixLineOrbit]:
    return geometry(group.n).base_locus()


def node_orbits(group: FiniteGroup) -> list[FixPointRecord]:
    return geometry(group.n).node_orbits


def line_orbit_census(orbit: FixLineOrbit, n: int) -> tuple[int, int]:
    return geometry(n).line_orbit_census(orbit)
