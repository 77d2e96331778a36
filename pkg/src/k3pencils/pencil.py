"""Bookkeeping along the pencil: ramification, swallowed orbits, cross-ratios and j."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import SPECIAL_INDICES, PencilCase, curve_sources, lambdas, load_case
from .cyclofield import CycNum
from .fixgeom import FixLineOrbit, FixPointRecord, geometry
from .lattice import format_factorization


class PencilError(ValueError):
    pass


def _off_orbit(n: int, line_type: str) -> FixLineOrbit:
    for o in geometry(n).off_quadric_orbits():
        if o.type_label == line_type:
            return o
    raise PencilError(f"no off-quadric fix-line of type {line_type} for degree {n}")


# --------------------------------------------------------------------------
# nodes and swallowing
# --------------------------------------------------------------------------


def node_record(case: PencilCase, catalog_dir: str | None = None) -> FixPointRecord:
    """The node orbit of a special member.

    Candidates must have ns points and fixing group F; the curves the case swallows
    must come from line types passing through the node.
    """
    if not case.is_special:
        raise PencilError("generic members have no node")
    sources = curve_sources(case.n, catalog_dir)
    needed = {sources[c] for c in case.swallowed}
    hits = [
        r
        for r in geometry(case.n).node_candidates()
        if r.orbit_length == case.ns
        and r.stabilizer_structure.label == case.node_group
        and set(r.meeting_lines) >= needed
    ]
    if len(hits) != 1:
        raise PencilError(f"case {case.case_id}: {len(hits)} node orbits fit the catalog data")
    return hits[0]


def nodes_on_line(case: PencilCase, line_type: str, catalog_dir: str | None = None) -> int:
    """Nodes on one fix-line of the given type: ns * (lines of that type per node) / l."""
    rec = node_record(case, catalog_dir)
    per_node = rec.meeting_lines.get(line_type, 0)
    length = _off_orbit(case.n, line_type).length
    count, rem = divmod(case.ns * per_node, length)
    if rem:
        raise PencilError(f"{case.ns}*{per_node}/{length} is not an integer")
    return count


def swallowed_orbits(case: PencilCase, line_type: str, catalog_dir: str | None = None) -> int:
    """H_L-orbits of transversal points that collapse pairwise into the nodes on a line."""
    orbit = _off_orbit(case.n, line_type)
    length, _ = geometry(case.n).line_orbit_census(orbit)
    count, rem = divmod(2 * nodes_on_line(case, line_type, catalog_dir), length)
    if rem:
        raise PencilError(f"nodes on {line_type} do not fill whole orbits")
    return count


def swallowed_curves(case: PencilCase, line_type: str, catalog_dir: str | None = None) -> int:
    """Each swallowed orbit carries an A_{o-1} chain, o = |F_L|."""
    return swallowed_orbits(case, line_type, catalog_dir) * (_off_orbit(case.n, line_type).fix_group_order - 1)


def catalog_swallowed_curves(case: PencilCase, catalog_dir: str | None = None) -> Counter:
    sources = curve_sources(case.n, catalog_dir)
    return Counter(sources[c] for c in case.swallowed)


# --------------------------------------------------------------------------
# ramification
# --------------------------------------------------------------------------


@dataclass
class RamificationSheet:
    n: int
    line_type: str
    cover_degree: int
    total_ramification: int
    quadric_contribution: int
    off_quadric: int
    per_case: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def consumed(self) -> int:
        """Ramification used up by the nodes: each node is two points colliding."""
        return sum(nodes for nodes, _ in self.per_case.values())

    def consistent(self) -> bool:
        return (
            self.off_quadric == self.total_ramification - self.quadric_contribution
            and self.consumed == self.off_quadric
        )


def ramification_sheet(n: int, line_type: str, catalog_dir: str | None = None) -> RamificationSheet:
    """Ramification of lambda restricted to a fix-line carrying several H_L-orbits."""
    g = geometry(n)
    orbit = _off_orbit(n, line_type)
    _, number = g.line_orbit_census(orbit)
    if number < 2:
        raise PencilError(f"{line_type} carries a single orbit; its points cannot merge")
    key = orbit.members[0]
    if g.base_hits(key):
        raise PencilError(f"{line_type} meets the base locus")
    degree = n
    total = 2 * degree - 2
    # q^(n/2) vanishes to order n/2 at each of the two quadric points
    quadric = 2 * (n // 2 - 1)
    sheet = RamificationSheet(n, line_type, degree, total, quadric, total - quadric)
    for i in SPECIAL_INDICES:
        case = load_case(f"{n},{i}", catalog_dir)
        nodes = nodes_on_line(case, line_type, catalog_dir)
        if nodes:
            sheet.per_case[case.case_id] = (nodes, swallowed_orbits(case, line_type, catalog_dir))
    return sheet


def ambiguous_line_types(n: int) -> list[str]:
    g = geometry(n)
    return [o.type_label for o in g.off_quadric_orbits() if g.line_orbit_census(o)[1] >= 2]


# --------------------------------------------------------------------------
# cross-ratios and j
# --------------------------------------------------------------------------


def cross_ratio(z1, z2, z3, z4):
    """(z1-z3)(z2-z4) / ((z1-z4)(z2-z3)), exact for Fractions and CycNums alike."""
    den = (z1 - z4) * (z2 - z3)
    if den == 0 or (isinstance(den, CycNum) and den.is_zero()):
        raise PencilError("coincident points")
    num = (z1 - z3) * (z2 - z4)
    if isinstance(den, CycNum):
        return num * den.inv()
    return Fraction(num) / Fraction(den)


def orbit_points(n: int, u):
    """Four points of one orbit on a general fix-line, in the coordinate u."""
    inv = u.inv() if isinstance(u, CycNum) else 1 / Fraction(u)
    if n in (6, 12):
        return (u, inv, -u, -inv)
    if n == 8:
        return (u, -u, 2 * inv, -2 * inv)
    raise PencilError(f"degree {n} not supported")


def orbit_cross_ratio(n: int, u):
    """Cross-ratio of the four orbit points on the line through u; closed form in u^2."""
    if not isinstance(u, CycNum):
        u = Fraction(u)
    u2 = u * u
    if n in (6, 12):
        num, den = 4 * u2, (1 + u2) * (1 + u2)
    elif n == 8:
        num, den = (u2 - 2) * (u2 - 2), (u2 + 2) * (u2 + 2)
    else:
        raise PencilError(f"degree {n} not supported")
    if isinstance(den, CycNum):
        if den.is_zero() or u.is_zero():
            raise PencilError("degenerate orbit configuration")
        return num * den.inv()
    if den == 0 or u == 0:
        raise PencilError("degenerate orbit configuration")
    return Fraction(num) / den


def parameter_cross_ratio(n: int, catalog_dir: str | None = None) -> Fraction:
    return cross_ratio(*lambdas(n, catalog_dir))


@dataclass(frozen=True)
class JValue:
    value: Fraction

    @property
    def numerator_factored(self) -> str:
        return format_factorization(self.value.numerator, signed=True)

    @property
    def denominator_factored(self) -> str:
        return format_factorization(self.value.denominator)

    def __str__(self) -> str:
        return f"{self.numerator_factored} / {self.denominator_factored}"


def j_invariant(cr) -> JValue:
    lam = Fraction(cr)
    if lam in (0, 1):
        raise PencilError("cross-ratio 0 or 1 is degenerate")
    return JValue((lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2))


def j_invariant_256(cr) -> JValue:
    """The elliptic-curve normalisation, 256 times the above."""
    return JValue(256 * j_invariant(cr).value)


def s3_orbit(lam) -> list[Fraction]:
    lam = Fraction(lam)
    return [lam, 1 - lam, 1 / lam, 1 / (1 - lam), (lam - 1) / lam, lam / (lam - 1)]
