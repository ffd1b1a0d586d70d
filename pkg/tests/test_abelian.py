import random

from hypothesis import given, strategies as st

from fpmember.abelian import (
    NOT_MEMBER,
    abelianize,
    integer_kernel,
    lattice_intersection,
    lattice_membership,
    smith_normal_form,
)
from fpmember.corpus import load
from fpmember.syntax import parse_presentation
from oracles import abelian_membership


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _det(m):
    # cofactor expansion; fine for the small sizes used here
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(len(m)))


def _is_smith(m, snf):
    u, d, v = [list(r) for r in snf.U], [list(r) for r in snf.D], [list(r) for r in snf.V]
    if _mul(_mul(u, m), v) != d:
        return False
    if abs(_det(u)) != 1 or abs(_det(v)) != 1:
        return False
    rows, cols = len(d), len(d[0])
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    diag = [d[i][i] for i in range(min(rows, cols))]
    if any(x < 0 for x in diag):
        return False
    return all(diag[i + 1] % diag[i] == 0 if diag[i] else diag[i + 1] == 0 for i in range(len(diag) - 1))


def test_smith_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    z = smith_normal_form([[0, 0], [0, 0]])
    assert z.diagonal == (0, 0) and z.U == ((1, 0), (0, 1)) and z.V == ((1, 0), (0, 1))
    assert smith_normal_form([[1, 0], [0, 1]]).diagonal == (1, 1)


def test_abelianize_examples():
    z2 = abelianize(load("Z2"))
    assert z2.matrix == ((0, 0),) and z2.invariant_factors == (0, 0)
    tref = abelianize(load("Trefoil"))
    assert tref.matrix == ((2, -3),) and tref.invariant_factors == (0,)
    assert abelianize(parse_presentation("< a | a^5 >")).invariant_factors == (5,)
    assert abelianize(load("Q8")).invariant_factors == (2, 2)
    assert abelianize(load("Genus2")).invariant_factors == (0, 0, 0, 0)


def test_lattice_membership_examples():
    assert lattice_membership([(2, 0), (0, 3)], (4, 3)) == (2, 1)
    assert lattice_membership([(2, 0), (0, 3)], (0, 0)) == (0, 0)
    assert lattice_membership([(2, 0), (0, 3)], (1, 0)) is NOT_MEMBER


def test_integer_kernel_examples():
    assert integer_kernel([[1, 1]]) == [(1, -1)]
    assert integer_kernel([[1, 0], [0, 1]]) == []
    assert len(integer_kernel([[0, 0]])) == 2


def test_lattice_intersection_odd_and_even():
    # 2Z ∩ 3Z = 6Z: coefficient 3 on the first basis vector
    assert lattice_intersection([(2,)], [(3,)]) == [(3,)]


def test_random_smith_bit_exact():
    rng = random.Random(5)
    for _ in range(200):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        assert _is_smith(m, smith_normal_form(m))


vec = st.lists(st.integers(-6, 6), min_size=3, max_size=3).map(tuple)


@given(st.lists(vec, min_size=0, max_size=3), vec)
def test_lattice_membership_against_echelon_oracle(basis, v):
    got = lattice_membership(basis, v)
    assert (got is not NOT_MEMBER) == abelian_membership(basis, v)
    if got is not NOT_MEMBER:
        assert tuple(sum(c * b[i] for c, b in zip(got, basis)) for i in range(3)) == v


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3))
def test_kernel_vectors_are_killed(m):
    for k in integer_kernel(m):
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in m)
