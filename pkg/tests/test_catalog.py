import shutil
from fractions import Fraction

import pytest

from k3pencils import catalog as cat
from k3pencils.catalog import (
    CatalogError,
    all_case_ids,
    curve_sources,
    default_catalog_dir,
    expected_table,
    generic_config,
    glue_classes,
    lambdas,
    load_case,
    parse_case_id,
    parse_case_text,
    parse_factored,
    parse_ratio,
    search_glue_classes,
    special_config,
)
from k3pencils.groups import build_projective_group
from k3pencils.lattice import dynkin_type


@pytest.fixture
def catalog_copy(tmp_path):
    dst = tmp_path / "data"
    shutil.copytree(default_catalog_dir(), dst)
    return dst


def test_case_ids():
    assert len(all_case_ids()) == 15
    assert parse_case_id("12,3") == (12, 3)
    assert parse_case_id("8,generic") == (8, None)
    for bad in ("9,1", "6,5", "six", "6"):
        with pytest.raises(CatalogError):
            parse_case_id(bad)


def test_generic_components():
    comps = sorted(len(c) for c in generic_config(6).components())
    assert comps == [1, 2, 2, 2, 2, 10]


@pytest.mark.parametrize(
    "cid, comp, dynkin",
    [
        ("6,1", {"N1", "N2", "N3", "N4", "X", "M1"}, "E6"),
        ("8,2", {"R1", "R2", "R3", "X", "M1", "M2"}, "D6"),
        ("12,4", {"S1", "S2", "S3", "S4", "X", "N1", "N2", "M1"}, "E8"),
        ("6,2", {"N1", "N2", "N3", "N4", "X"}, "A5"),
    ],
)
def test_special_components(cid, comp, dynkin):
    n, i = parse_case_id(cid)
    special_config(n, i)
    case = load_case(cid)
    c = case.special_component()
    assert set(c.labels) == comp
    assert dynkin_type(c) == dynkin


def test_all_special_dynkin_types():
    want = ["E6", "A5", "A5", "E6", "E7", "D6", "D4", "D5", "E6", "D5", "D7", "E8"]
    got = []
    for n in cat.DEGREES:
        for i in cat.SPECIAL_INDICES:
            cfg = special_config(n, i)
            assert len(cfg) == 20
            got.append(load_case(f"{n},{i}").dynkin)
    assert got == want


def test_ns_is_orbit_length():
    for cid in all_case_ids():
        case = load_case(cid)
        if case.is_special:
            order = build_projective_group({6: "T", 8: "O", 12: "I"}[case.n]).order
            size = {"T": 12, "O": 24, "I": 60, "Z2xZ2": 4}.get(case.node_group)
            if size is None:
                k = int(case.node_group[1:])
                size = k if case.node_group[0] == "Z" else 2 * k
            assert case.ns * size == order


def test_lambdas():
    assert lambdas(6) == [Fraction(-1), Fraction(-2, 3), Fraction(-7, 12), Fraction(-1, 4)]
    assert lambdas(12)[3] == 0


def test_glue_classes_pass():
    for cid in all_case_ids():
        case = load_case(cid)
        classes = glue_classes(case)
        assert len(classes) == (0 if case.n == 12 else 2)


@pytest.mark.parametrize("cid", ["6,generic", "8,generic", "8,3", "6,2"])
def test_glue_classes_found_by_search(cid):
    case = load_case(cid)
    for vec, p in case.glue_vectors():
        found = search_glue_classes(case, p)
        assert vec in found or tuple(-x for x in vec) in found


def test_sources_cover_all_offquadric_curves():
    for n in cat.DEGREES:
        src = curve_sources(n)
        labels = generic_config(n).labels
        assert set(src) == {lab for lab in labels if not lab.startswith("L")}


def test_expected_table():
    exp = expected_table()
    assert exp.int("group_order.12") == 3600
    assert exp.table("special_det.8,3") == "special discriminants"
    assert parse_factored("2^3*3^2*5*11") == 3960
    assert parse_factored("-2^3") == -8
    assert parse_ratio("13^3*37^3/2^8*3^4*5^4") == Fraction(13**3 * 37**3, 2**8 * 3**4 * 5**4)


def test_parse_errors():
    with pytest.raises(CatalogError):
        parse_case_text("L1\n")
    with pytest.raises(CatalogError):
        parse_case_text("[META]\nn: 7\ncase: generic\n")
    with pytest.raises(CatalogError):
        parse_case_text("[META]\nn: 6\ncase: generic\n[EDGES]\nL1 L2 L3\n")
    with pytest.raises(CatalogError):
        parse_case_text("[BOGUS]\n")
    with pytest.raises(CatalogError):
        parse_case_text("[META]\nn: 6\ncase: generic\n[VERTICES]\nL1\n[GLUE]\nL / 3 L1:1\n")


def test_section_order_irrelevant():
    a = parse_case_text("[META]\nn: 6\ncase: generic\n[VERTICES]\nA\nB\n[EDGES]\nA B\n")
    b = parse_case_text("[EDGES]\nA B\n[VERTICES]\nA\nB\n[META]\ncase: generic\nn: 6\n")
    assert a.config.edges == b.config.edges


def test_missing_file(tmp_path):
    with pytest.raises(CatalogError):
        load_case("6,1", str(tmp_path))


def _rewrite(path, old, new):
    text = path.read_text(encoding="utf-8")
    assert old in text
    path.write_text(text.replace(old, new, 1), encoding="utf-8")


def test_corrupt_special_graph_detected(catalog_copy):
    _rewrite(catalog_copy / "case_8_2.txt", "node_group: D4", "node_group: D5")
    with pytest.raises(CatalogError):
        special_config(8, 2, str(catalog_copy))


def test_corrupt_glue_detected(catalog_copy):
    _rewrite(catalog_copy / "case_8_generic.txt", "L / 2 = L1:1 L3:1", "L / 2 = L1:1 L2:1")
    case = load_case("8,generic", str(catalog_copy))
    with pytest.raises(CatalogError):
        glue_classes(case)


def test_extra_vertex_detected(catalog_copy):
    _rewrite(catalog_copy / "case_6_1.txt", "[VERTICES]\n", "[VERTICES]\nZ9\n")
    with pytest.raises(CatalogError):
        special_config(6, 1, str(catalog_copy))
