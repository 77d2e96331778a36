from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3pencils.cyclofield import (
    GAMMA,
    I,
    OMEGA,
    ONE,
    SQRT2,
    SQRT5,
    ZERO,
    CycMatrix,
    CycNum,
    eigenvalues_finite_order,
    from_array,
    solve_kernel,
    to_array,
    zeta,
)
from k3pencils.groups import build_binary_group

small = st.integers(-4, 4)
cycnums = st.builds(
    lambda terms, den: sum((c * zeta(k) for k, c in terms), ZERO) / den,
    st.lists(st.tuples(st.integers(0, 119), small), max_size=4),
    st.integers(1, 5),
)
nonzero = cycnums.filter(lambda x: not x.is_zero())


def test_root_products():
    assert zeta(40) * zeta(80) == ONE
    assert zeta(120) == ONE
    assert zeta(60) == -ONE


def test_cube_roots_sum():
    assert OMEGA + OMEGA**2 == -ONE


def test_sqrt2_and_sqrt5():
    assert (GAMMA + GAMMA.conj()) ** 2 == 2 * ONE
    assert SQRT2 * SQRT2 == CycNum.from_rational(2)
    assert SQRT5 * SQRT5 == 5 * ONE


def test_canonical_form_independent_of_path():
    # zeta^45 written two ways
    assert zeta(15) * zeta(30) == zeta(45)
    assert (zeta(9) ** 5) == zeta(45)
    assert CycNum([0] * 45 + [1]) == zeta(45)


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inv()


def test_rational_round_trip():
    x = CycNum.from_rational(Fraction(-7, 12))
    assert x.is_rational() and x.to_fraction() == Fraction(-7, 12)


@given(cycnums, cycnums, cycnums)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@given(nonzero)
def test_inverse(a):
    assert a * a.inv() == ONE


@given(cycnums, cycnums)
def test_conjugation_is_an_automorphism(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@given(cycnums)
def test_array_round_trip(a):
    arr, den = to_array([a, a * I])
    assert from_array(arr, den) == [a, a * I]


def test_kernel_examples():
    assert solve_kernel(CycMatrix.identity(2)) == []
    assert len(solve_kernel(CycMatrix.zeros(2, 2))) == 2


def test_kernel_of_eigen_shift():
    for p in build_binary_group("I")[:30]:
        m = p.matrix
        e1, _ = eigenvalues_finite_order(m)
        if e1 == ONE or e1 == -ONE:
            continue
        shifted = m - CycMatrix.identity(2).scale(e1)
        (v,) = solve_kernel(shifted)
        assert m.apply(v) == tuple(e1 * x for x in v)


@given(st.lists(st.lists(cycnums, min_size=3, max_size=3), min_size=2, max_size=3))
def test_kernel_vectors_are_annihilated(rows):
    m = CycMatrix(rows)
    for v in solve_kernel(m):
        assert all(x.is_zero() for x in m.apply(v))


def test_eigenvalue_examples():
    assert eigenvalues_finite_order(CycMatrix.identity(2)) == (ONE, ONE)
    e = eigenvalues_finite_order(CycMatrix([[I, ZERO], [ZERO, -I]]))
    assert set(e) == {I, -I}


def test_order_ten_eigenvalues():
    for p in build_binary_group("I"):
        if p.order() == 10:
            e1, e2 = eigenvalues_finite_order(p.matrix)
            assert e1 * e2 == ONE
            assert e1**10 == ONE and e1**5 != ONE
            assert e1 + e2 == p.matrix.trace()
