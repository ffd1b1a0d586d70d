import pytest
from hypothesis import given, settings, strategies as st

from fpmember.certify import enum_finite_index_subgroups
from fpmember.corpus import load
from fpmember.decide import (
    CaseTag,
    Outcome,
    PeripheralCase,
    RetractReduction,
    commutation_test,
    coset_intersection_witness,
    decide_double_coset,
    decide_membership,
    decide_membership_finite_index,
    decide_word,
    intersect_peripheral,
    membership_via_retract,
)
from fpmember.enumeration import Budget, Exhausted
from fpmember.syntax import parse_presentation, parse_word
from fpmember.words import DecoratedPresentation, GeneratorMap, identity_map
from oracles import free_membership
from strategies import words

Z2 = load("Z2")
F2 = load("F2")
F1 = load("F1")
BUDGET = Budget(10**6, 6)


def W(text, pres=Z2):
    return parse_word(text, pres)


def test_word_problem_examples():
    w = W("a b a b^-1 a^-2")
    d = decide_word(Z2, w, BUDGET)
    assert d.outcome is Outcome.TRIVIAL and d.certificate.check(Z2, w)
    d = decide_word(Z2, W("a"), BUDGET)
    assert d.outcome is Outcome.NONTRIVIAL
    assert d.certificate.quotient.degree == 2 and d.certificate.check(Z2, W("a"))
    d = decide_word(Z2, (), BUDGET)
    assert d.outcome is Outcome.TRIVIAL and d.steps_used == 0


def test_membership_examples():
    xs = [W("a^2"), W("b")]
    d = decide_membership(Z2, xs, W("a^4 b^-1"), BUDGET)
    assert d.outcome is Outcome.MEMBER and d.certificate.check(Z2, W("a^4 b^-1"))
    d = decide_membership(Z2, xs, W("a"), BUDGET)
    assert d.outcome is Outcome.NON_MEMBER
    assert d.certificate.quotient.degree == 2 and d.certificate.check(Z2, W("a"), xs)
    d = decide_membership(F2, [(1,)], W("a^-3", F2), BUDGET)
    assert d.outcome is Outcome.MEMBER


def test_double_coset_examples():
    a, b = [W("a", F2)], [W("b", F2)]
    d = decide_double_coset(F2, a, b, W("a^3 b^-2", F2), BUDGET)
    assert d.outcome is Outcome.MEMBER and d.certificate.check(F2, W("a^3 b^-2", F2))
    d = decide_double_coset(F2, a, b, W("b a", F2), BUDGET)
    assert d.outcome is Outcome.NON_MEMBER
    assert d.certificate.quotient.degree == 3
    assert d.certificate.check(F2, W("b a", F2), a, b)
    assert decide_double_coset(F2, a, b, (), BUDGET).outcome is Outcome.MEMBER


def test_coset_intersection_examples():
    xs, a = [W("a^2", F1)], W("a", F1)
    r = coset_intersection_witness(F1, xs, [W("a^3", F1)], a, BUDGET)
    assert r.outcome == "witness" and r.element == (1, 1, 1)
    assert r.check(F1, xs, [W("a^3", F1)], a)
    r = coset_intersection_witness(F1, xs, [W("a^4", F1)], a, BUDGET)
    assert r.outcome == "empty" and r.check(F1, xs, [W("a^4", F1)], a)
    r = coset_intersection_witness(F2, [(2,)], [(2,)], (), BUDGET)
    assert r.outcome == "witness" and r.element == ()


@pytest.mark.parametrize(
    "pres, gens, z, outcome",
    [
        (Z2, ["a^2", "b"], "a^2 b^5", Outcome.MEMBER),
        (Z2, ["a^2", "b"], "a b", Outcome.NON_MEMBER),
        (load("C6"), ["a^2"], "a^4", Outcome.MEMBER),
        (load("C6"), ["a^2"], "a^3", Outcome.NON_MEMBER),
        (Z2, ["a", "b"], "a^3 b^-7 a", Outcome.MEMBER),
    ],
)
def test_finite_index_membership(pres, gens, z, outcome):
    xs = [W(g, pres) for g in gens]
    d = decide_membership_finite_index(pres, xs, W(z, pres), BUDGET)
    assert d.outcome is outcome
    if outcome is Outcome.MEMBER:
        assert d.certificate.check(pres, W(z, pres))
    else:
        assert d.certificate.check(pres, W(z, pres), xs)


def test_finite_index_membership_gives_up_on_infinite_index():
    d = decide_membership_finite_index(F2, [(1,)], (2,), Budget(5000, 4))
    assert d.outcome is Outcome.EXHAUSTED


def _parity_subgroup():
    for e in enum_finite_index_subgroups(Z2, 2):
        if e.index == 2 and sorted(e.source_quotient.images) == [(0, 1), (1, 0)] and e.source_quotient.images[0] == (1, 0):
            return e
    raise AssertionError("no a-parity subgroup")


def test_retract_reduction_examples():
    sub = _parity_subgroup()
    idm = identity_map(sub.presentation)
    h = [W("a^2 b")]
    d = membership_via_retract(Z2, sub, idm, idm, h, W("a^4 b^2"), BUDGET)
    assert d.outcome is Outcome.MEMBER and isinstance(d.certificate, RetractReduction)
    assert d.certificate.direct_witness.check(Z2, W("a^4 b^2"))
    d = membership_via_retract(Z2, sub, idm, idm, h, W("a"), BUDGET)
    assert d.outcome is Outcome.NON_MEMBER


def test_retract_reduction_index_one():
    one = next(enum_finite_index_subgroups(Z2, 1))
    idm = identity_map(one.presentation)
    xs = [W("a^2"), W("b")]
    for z in ("a", "a^2 b^3"):
        got = membership_via_retract(Z2, one, idm, idm, xs, W(z), BUDGET).outcome
        assert got is decide_membership(Z2, xs, W(z), BUDGET).outcome


def test_commutation_examples():
    assert commutation_test(Z2, [W("a")], [W("b")], BUDGET).outcome == "commute"
    r = commutation_test(F2, [(1,)], [(2,)], BUDGET)
    assert r.outcome == "not_commute"
    pair, cert = r.certificate
    assert cert.check(F2, (1, 2, -1, -2))
    assert commutation_test(F2, [], [(2,)], BUDGET).outcome == "commute"


def test_peripheral_cases():
    one = next(enum_finite_index_subgroups(Z2, 1))
    dec = DecoratedPresentation(Z2, ((0, (Z2, identity_map(Z2))),))
    fiber = PeripheralCase(CaseTag.FIBER, one, fiber=(1, 0))
    assert fiber.check()
    assert intersect_peripheral(dec, 0, [W("b")], fiber, BUDGET).elements == ((2,),)
    retr = PeripheralCase(CaseTag.RETRACTION, one, retraction=((1,), (2,)))
    got = intersect_peripheral(dec, 0, [W("a"), W("b")], retr, BUDGET).elements
    assert got == ((1,), (2,))
    center = PeripheralCase(CaseTag.PRODUCT_CENTER, one, retraction=((1, 1), ()), center=((1,),))
    assert intersect_peripheral(dec, 0, [W("a^2")], center, BUDGET).elements == ((1, 1),)


def test_peripheral_not_commuting():
    pi = parse_presentation("group Pi = < a, b, c | [a,c], [b,c] >")
    edge = parse_presentation("group E = < h, k | [h,k] >")
    one = next(enum_finite_index_subgroups(pi, 1))
    dec = DecoratedPresentation(pi, ((0, (edge, GeneratorMap(edge, pi, ((1,), (3,))))),))
    ys = [W("a b", pi), W("c", pi)]
    case = PeripheralCase(CaseTag.PRODUCT_CENTER, one, retraction=((1, 2), (), (3,)), center=((3,),))
    assert intersect_peripheral(dec, 0, ys, case, BUDGET).elements == ((3,),)
    case = PeripheralCase(CaseTag.RETRACTION, one, retraction=((1, 2), (), (3,)))
    assert intersect_peripheral(dec, 0, ys, case, BUDGET).elements == ()


@settings(max_examples=40)
@given(st.lists(words(2, 4).filter(bool), min_size=1, max_size=2), words(2, 5))
def test_free_membership_agrees_with_folding(gens, z):
    d = decide_membership(F2, gens, z, Budget(200_000, 6))
    if d.decided:
        assert (d.outcome is Outcome.MEMBER) == free_membership(gens, z)
        if d.outcome is Outcome.MEMBER:
            assert d.certificate.check(F2, z)
        else:
            assert d.certificate.check(F2, z, gens)
