from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3pencils.catalog import load_case
from k3pencils.cyclofield import CycNum, I, SQRT2, zeta
from k3pencils.pencil import (
    PencilError,
    ambiguous_line_types,
    catalog_swallowed_curves,
    cross_ratio,
    j_invariant,
    j_invariant_256,
    node_record,
    nodes_on_line,
    orbit_cross_ratio,
    orbit_points,
    parameter_cross_ratio,
    ramification_sheet,
    s3_orbit,
    swallowed_curves,
    swallowed_orbits,
)


@pytest.mark.parametrize(
    "n, line, total, off", [(6, "N′", 10, 6), (6, "N″", 10, 6), (8, "M", 14, 8), (12, "M", 22, 12), (12, "N", 22, 12)]
)
def test_ramification(n, line, total, off):
    s = ramification_sheet(n, line)
    assert (s.cover_degree, s.total_ramification, s.off_quadric) == (n, total, off)
    assert s.consistent()


def test_ambiguous_types():
    assert ambiguous_line_types(8) == ["M"]
    assert sorted(ambiguous_line_types(12)) == ["M", "N"]


def test_unambiguous_type_rejected():
    with pytest.raises(PencilError):
        ramification_sheet(12, "S")


def test_degree_twelve_m_swallowing():
    s = ramification_sheet(12, "M")
    assert [s.per_case[f"12,{i}"][1] for i in range(1, 5)] == [1, 2, 2, 1]


@pytest.mark.parametrize("cid, line, count", [("12,1", "M", 2), ("8,4", "M", 4), ("12,2", "N", 3), ("12,4", "S", 5)])
def test_nodes_on_line(cid, line, count):
    assert nodes_on_line(load_case(cid), line) == count


def test_nodes_times_length_recovers_ns():
    for n in (6, 8, 12):
        for i in range(1, 5):
            case = load_case(f"{n},{i}")
            rec = node_record(case)
            for t, per_node in rec.meeting_lines.items():
                from k3pencils.pencil import _off_orbit

                assert nodes_on_line(case, t) * _off_orbit(n, t).length == case.ns * per_node


def test_swallowed_curves_match_graphs():
    for n in (6, 8, 12):
        for i in range(1, 5):
            case = load_case(f"{n},{i}")
            rec = node_record(case)
            derived = {t: swallowed_curves(case, t) for t in rec.meeting_lines if swallowed_curves(case, t)}
            assert derived == dict(catalog_swallowed_curves(case))


def test_swallowed_orbits_example():
    assert swallowed_orbits(load_case("12,1"), "N") == 2


def test_generic_has_no_node():
    with pytest.raises(PencilError):
        node_record(load_case("6,generic"))


def test_orbit_cross_ratio_examples():
    assert orbit_cross_ratio(6, 1) == 1
    assert orbit_cross_ratio(8, SQRT2).is_zero()
    assert orbit_cross_ratio(6, 2) != orbit_cross_ratio(6, 3)


def test_orbit_cross_ratio_degenerate():
    with pytest.raises(PencilError):
        orbit_cross_ratio(6, I)
    with pytest.raises(PencilError):
        orbit_cross_ratio(8, SQRT2 * I)


@given(st.fractions(min_value=Fraction(1, 50), max_value=50), st.sampled_from([6, 8, 12]))
def test_closed_form_matches_four_points(u, n):
    pts = orbit_points(n, u)
    if len(set(pts)) < 4:
        return
    assert orbit_cross_ratio(n, u) == cross_ratio(*pts)


def test_closed_form_in_field():
    u = zeta(7) + 2
    assert orbit_cross_ratio(12, u) == cross_ratio(*orbit_points(12, u))


@pytest.mark.parametrize("n, cr", [(6, Fraction(25, 9)), (8, Fraction(49, 48)), (12, Fraction(121, 96))])
def test_parameter_cross_ratio(n, cr):
    assert parameter_cross_ratio(n) == cr


@pytest.mark.parametrize(
    "n, num, den",
    [
        (6, 13**3 * 37**3, 2**8 * 3**4 * 5**4),
        (8, 13**3 * 181**3, 2**8 * 3**2 * 7**4),
        (12, 12241**3, 2**10 * 3**2 * 5**4 * 11**4),
    ],
)
def test_j_values(n, num, den):
    j = j_invariant(parameter_cross_ratio(n))
    assert j.value == Fraction(num, den)
    assert j_invariant_256(parameter_cross_ratio(n)).value == 256 * j.value


def test_j_factorisation_text():
    assert str(j_invariant(Fraction(25, 9))) == "13³·37³ / 2⁸·3⁴·5⁴"


def test_j_hand_evaluation():
    # (lam^2 - lam + 1)^3 / (lam^2 (lam-1)^2) at lam = 25/9, expanded by hand
    lam = Fraction(25, 9)
    assert (lam * lam - lam + 1) == Fraction(481, 81)
    assert lam**2 == Fraction(625, 81) and (lam - 1) ** 2 == Fraction(256, 81)
    assert j_invariant(lam).value == Fraction(481**3, 81 * 625 * 256)
    assert 481 == 13 * 37


def test_j_degenerate():
    for bad in (0, 1):
        with pytest.raises(PencilError):
            j_invariant(bad)


@given(st.fractions().filter(lambda x: x not in (0, 1)))
def test_j_is_s3_invariant(lam):
    values = {j_invariant(x).value for x in s3_orbit(lam)}
    assert len(values) == 1


moebius = st.tuples(*[st.integers(-5, 5)] * 4).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0)


@given(moebius, st.sampled_from([6, 8, 12]))
def test_cross_ratio_moebius_invariant(m, n):
    from k3pencils.catalog import lambdas

    a, b, c, d = m
    lams = lambdas(n)
    if any(c * x + d == 0 for x in lams):
        return
    moved = [Fraction(a * x + b) / (c * x + d) for x in lams]
    assert cross_ratio(*moved) == parameter_cross_ratio(n)


def test_cross_ratio_coincident():
    with pytest.raises(PencilError):
        cross_ratio(1, 2, 3, 1)
    assert cross_ratio(0, 1, 2, 3) == Fraction(4, 3)
    assert cross_ratio(*(CycNum.from_rational(x) for x in (0, 1, 2, 3))) == CycNum.from_rational(Fraction(4, 3))
