from collections import Counter

import pytest

from k3pencils.cyclofield import ONE
from k3pencils.fixgeom import (
    GroupId,
    classify_base_point,
    classify_line_point,
    cyclic_quotient_type,
    identify_group,
    line_orbit_census,
    node_resolution_type,
    pluecker_pairing,
)
from k3pencils.groups import bilinear_form, quadratic_form, tensor_point
from k3pencils.cyclofield import I, OMEGA, zeta


def offq(geo):
    return {o.type_label: o for o in geo.off_quadric_orbits()}


def test_orbit_stabilizer(geo):
    for o in geo.line_orbits:
        assert o.length * o.stabilizer_order == geo.group.order
        assert o.stabilizer_order % o.fix_group_order == 0


def test_stabilizer_direct_matches_perm_tables(geo):
    for o in geo.off_quadric_orbits():
        assert geo.line_stabilizer_direct(o.representative) == o.stabilizer_order


@pytest.mark.parametrize(
    "n, table",
    [
        (6, {"M": (2, 18, 4), "N′": (3, 16, 3), "N″": (3, 16, 3)}),
        (8, {"M": (2, 72, 4), "M′": (2, 36, 8), "M″": (2, 36, 8), "N": (3, 32, 6), "R": (4, 18, 8)}),
        (12, {"M": (2, 450, 4), "N": (3, 200, 6), "S": (5, 72, 10)}),
    ],
)
def test_offquadric_census(n, table):
    from k3pencils.fixgeom import geometry

    got = {k: (o.fix_group_order, o.length, o.general_orbit_length) for k, o in offq(geometry(n)).items()}
    assert got == table


@pytest.mark.parametrize("n, lengths", [(6, [4, 4, 6]), (8, [6, 8, 12]), (12, [12, 20, 30])])
def test_ruling_lengths(n, lengths):
    from k3pencils.fixgeom import geometry

    g = geometry(n)
    for side in ("left", "right"):
        assert sorted(o.length for o in g.ruling_orbits(side)) == lengths


def test_base_locus(geo):
    base = geo.base_locus()
    assert sum(o.length for o in base) == 2 * geo.n
    assert {o.fix_group_order for o in base} == {geo.s}
    assert {o.kind for o in base} == {"left", "right"}


def test_plucker_relation_and_quadric(geo):
    for o in geo.line_orbits:
        p = o.representative.pluecker
        assert pluecker_pairing(p, p).is_zero()
        assert o.representative.on_quadric == (o.kind != "off")


def test_offquadric_lines_meet_quadric_in_two_tensor_points(geo):
    for o in geo.off_quadric_orbits():
        (a, b), (a2, b2) = o.members[0][1], o.members[0][2]
        p = tensor_point(geo.left_points[a], geo.right_points[b])
        p2 = tensor_point(geo.left_points[a2], geo.right_points[b2])
        assert quadratic_form(p).is_zero() and quadratic_form(p2).is_zero()
        # q restricted to the line is 2 s t <p, p2>, so exactly these two zeros
        assert not bilinear_form(p, p2).is_zero()
        line = geo.line(o.members[0])
        assert line.contains(p) and line.contains(p2)


def test_alpha_beta_is_plus_minus_one(geo):
    for o in geo.off_quadric_orbits():
        for key in o.members[:5]:
            line = geo.line(key)
            for e in geo.line_fixers[key]:
                m = geo.group.matrix(int(e))
                x = line.span[0]
                img = m.apply(x)
                k = next(i for i in range(4) if not x[i].is_zero())
                mu = img[k] / x[k]
                assert mu in (ONE, -ONE)
                assert all((img[i] - mu * x[i]).is_zero() for i in range(4))


@pytest.mark.parametrize(
    "n, s, t, label",
    [(6, 2, 3, "A2"), (8, 3, 4, "A3"), (8, 3, 2, "A1"), (12, 5, 2, "A1"), (12, 5, 3, "A2"), (6, 2, 2, "smooth")],
)
def test_classify_base_point(n, s, t, label):
    assert classify_base_point(n, s, t) == label


def test_classify_base_point_rejects():
    with pytest.raises(ValueError):
        classify_base_point(12, 5, 4)
    with pytest.raises(ValueError):
        classify_base_point(6, 3, 2)


def test_base_point_census(geo):
    want = {6: {2: 1, 3: 2}, 8: {2: 1, 3: 1, 4: 1}, 12: {2: 1, 3: 1, 5: 1}}[geo.n]
    assert geo.base_point_census() == want


def test_base_point_tracing_agrees(geo):
    for b in geo.base_point_orbits():
        assert geo.trace_base_point(b.t) == classify_base_point(geo.n, geo.s, b.t) == b.singularity


@pytest.mark.parametrize(
    "n, rows",
    [
        (6, {"M": (4, 4, 1, "A1"), "N′": (6, 3, 2, "A2"), "N″": (6, 3, 2, "A2")}),
        (8, {"M′": (8, 8, 1, "A1"), "M″": (8, 8, 1, "A1"), "M": (8, 4, 2, "A1"), "N": (6, 6, 1, "A2"), "R": (8, 8, 1, "A3")}),
        (12, {"M": (12, 4, 3, "A1"), "N": (12, 6, 2, "A2"), "S": (10, 10, 1, "A4")}),
    ],
)
def test_line_point_census(n, rows):
    from k3pencils.fixgeom import geometry

    g = geometry(n)
    for label, o in offq(g).items():
        points = n - g.base_hits(o.members[0])
        length, number = line_orbit_census(o, n)
        assert (points, length, number, classify_line_point(o)) == rows[label]
        assert g.trace_line_point(o) == classify_line_point(o)


def test_classify_line_point_needs_offquadric(geo6):
    with pytest.raises(ValueError):
        classify_line_point(geo6.ruling_orbits("left")[0])


@pytest.mark.parametrize(
    "group, label",
    [("T", "E6"), ("O", "E7"), ("I", "E8"), ("Z3", "A5"), ("Z2", "A3"), ("D3", "D5"), ("D4", "D6"), ("D5", "D7"), ("Z2xZ2", "D4")],
)
def test_node_resolution_type(group, label):
    assert node_resolution_type(group) == label


def test_node_resolution_type_unknown():
    with pytest.raises(ValueError):
        node_resolution_type("Q8")


def test_identify_group():
    assert identify_group([1, 2, 2, 2]) == GroupId("Z2xZ2", 4)
    assert identify_group([1, 3, 3]) == GroupId("Z", 3)
    assert identify_group([1, 2, 2, 2, 3, 3]).label == "D3"
    assert identify_group([1] + [2] * 3 + [3] * 8).label == "T"


def test_cyclic_quotient_type():
    assert cyclic_quotient_type(I, -I) == "A3"
    assert cyclic_quotient_type(OMEGA, OMEGA**2) == "A2"
    assert cyclic_quotient_type(ONE, ONE) == "smooth"
    with pytest.raises(ValueError):
        cyclic_quotient_type(zeta(1), zeta(1))


NODES = {
    6: [(12, "T", {"M": 3, "N′": 4}), (12, "T", {"M": 3, "N″": 4})],
    8: [(24, "O", {"M": 6, "N": 4, "R": 3}), (72, "D4", {"M′": 2, "M″": 2, "R": 1}),
        (96, "D3", {"M": 3, "N": 1}), (144, "Z2xZ2", {"M": 1, "M′": 1, "M″": 1})],
    12: [(60, "I", {"M": 15, "N": 10, "S": 6}), (300, "T", {"M": 3, "N": 4}),
         (360, "D5", {"M": 5, "S": 1}), (600, "D3", {"M": 3, "N": 1})],
}


def test_node_orbits(geo):
    key = lambda r: (r[0], r[1], sorted(r[2].items()))  # noqa: E731
    got = sorted(((r.orbit_length, r.stabilizer_structure.label, dict(r.meeting_lines)) for r in geo.node_orbits), key=key)
    assert got == sorted(NODES[geo.n], key=key)
    for r in geo.node_orbits:
        assert r.orbit_length * len(r.stabilizer) == geo.group.order
        assert quadratic_form(r.point) != 0 * ONE
        assert r.singularity == node_resolution_type(r.stabilizer_structure)


def test_single_line_families(geo6):
    fams = [geo6.line_node_family(o) for o in geo6.off_quadric_orbits()]
    got = Counter((r.orbit_length, r.stabilizer_structure.label) for r in fams)
    assert got == Counter({(48, "Z3"): 2, (72, "Z2"): 1})


def test_same_orbit(geo8):
    r = geo8.node_orbits[0]
    y = geo8.group.matrix(17).apply(r.point)
    assert geo8.same_orbit(r.point, y)
    assert not geo8.same_orbit(r.point, geo8.node_orbits[1].point)
