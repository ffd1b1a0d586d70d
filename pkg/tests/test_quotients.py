import itertools
from math import factorial

from hypothesis import given, strategies as st

from fpmember.corpus import load
from fpmember.quotients import (
    FiniteQuotient,
    compose,
    double_coset_image_test,
    enum_sym_homs,
    identity_perm,
    invert,
    perm_closure,
    perm_coset_reps,
    quotient_stream,
    subgroup_image_test,
)
from fpmember.enumeration import Budget, Exhausted
from fpmember.cosets import find_separating_quotient
from fpmember.syntax import parse_presentation, parse_word
from strategies import words

F2 = load("F2")
Z2 = load("Z2")


def _transitive(q):
    orbit, frontier = {0}, [0]
    while frontier:
        x = frontier.pop()
        for p in q.images:
            for y in (p[x], invert(p)[x]):
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
    return len(orbit) == q.degree


def test_sym_hom_counts():
    assert len(enum_sym_homs(parse_presentation("< a | a^2 >"), 2)) == 2
    assert len(enum_sym_homs(parse_presentation("< a | a^3 >"), 2)) == 1
    assert len(enum_sym_homs(Z2, 2)) == 4
    assert len(enum_sym_homs(Z2, 3)) == 18


def test_perm_closure_examples():
    assert perm_closure([identity_perm(3)], 3).order == 1
    assert perm_closure([(1, 2, 0)], 3).order == 3
    assert perm_closure([(1, 0, 2), (0, 2, 1)], 3).order == 6


def test_perm_coset_reps_examples():
    s2 = perm_closure([(1, 0)], 2)
    assert len(perm_coset_reps(s2, [(0, 1)])) == 2
    s3 = perm_closure([(1, 0, 2), (0, 2, 1)], 3)
    c3 = perm_closure([(1, 2, 0)], 3).elements
    assert len(perm_coset_reps(s3, c3)) == 2
    assert perm_coset_reps(s3, s3.elements) == [identity_perm(3)]


def test_transitive_stream_matches_brute_force():
    # index-n subgroups of F2: transitive homs to S_n divided by (n-1)!
    stream = [q for q in quotient_stream(F2, 4) if q is not None]
    for n in range(1, 5):
        brute = sum(1 for q in enum_sym_homs(F2, n) if _transitive(q))
        assert brute % factorial(n - 1) == 0
        assert sum(1 for q in stream if q.degree == n) == brute // factorial(n - 1)
    assert all(_transitive(q) and q.kills_relators() for q in stream)


def test_transitive_stream_respects_relators():
    c6 = load("C6")
    degrees = sorted(q.degree for q in quotient_stream(c6, 6) if q is not None)
    # one transitive action of Z/6 per divisor
    assert degrees == [1, 2, 3, 6]


def test_separating_quotient_examples():
    cert = find_separating_quotient(Z2, [parse_word("a^2", Z2), parse_word("b", Z2)], Budget(10_000, 4))
    assert cert.quotient.degree == 2
    assert cert.coset_reps == ((), (1,))
    cert = find_separating_quotient(load("F1"), [(1,)], Budget(1000, 4))
    assert cert.quotient.degree == 1
    res = find_separating_quotient(F2, [(1,)], Budget(5000, 4))
    assert isinstance(res, Exhausted)


def test_double_coset_test_examples():
    q = FiniteQuotient(F2, 3, ((1, 0, 2), (2, 1, 0)))
    a, b = (1,), (2,)
    assert double_coset_image_test(q, [a], [b], (1, 2))
    assert not double_coset_image_test(q, [a], [b], (2, 1))
    assert double_coset_image_test(q, [a], [b], ())
    assert double_coset_image_test(q, [a, b], [a, b], (2, 1, -2, 1))


perm3 = st.sampled_from(list(itertools.permutations(range(3))))


@given(perm3, perm3, words(2, 6))
def test_image_tests_against_enumeration(pa, pb, z):
    q = FiniteQuotient(F2, 3, (pa, pb))
    xs, ys = [(1,)], [(2, 1)]
    gx = perm_closure([q.image(x) for x in xs], 3).elements
    gy = perm_closure([q.image(y) for y in ys], 3).elements
    products = {compose(g, h) for g in gx for h in gy}
    assert double_coset_image_test(q, xs, ys, z) == (q.image(z) in products)
    assert subgroup_image_test(q, xs, z) == (q.image(z) in set(gx))
