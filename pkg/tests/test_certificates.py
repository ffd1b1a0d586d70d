import json

from hypothesis import given, settings, strategies as st

from fpmember.certificates import (
    decision_certificate,
    dumps,
    image_mutations,
    intersection_certificate,
    iso_certificate,
    subgroups_certificate,
    verify_certificate,
    witness_mutations,
)
from fpmember.certify import enum_finite_index_subgroups, find_isomorphism
from fpmember.corpus import load
from fpmember.decide import (
    coset_intersection_witness,
    decide_double_coset,
    decide_membership,
    decide_word,
)
from fpmember.enumeration import Budget
from fpmember.quotients import FiniteQuotient, double_coset_image_test, subgroup_image_test
from fpmember.syntax import parse_presentation, parse_word
from strategies import words

Z2 = load("Z2")
F2 = load("F2")
B = Budget(100_000, 6)


def _docs():
    w = lambda s, p=Z2: parse_word(s, p)
    out = []
    for z in ("[a,b] a", "a b a^-1 b^-1"):
        out.append(decision_certificate("word", Z2, decide_word(Z2, w(z), B), word=w(z)))
    xs = [w("a^2"), w("b")]
    for z in ("a^4 b^-1", "a b"):
        out.append(decision_certificate("member", Z2, decide_membership(Z2, xs, w(z), B), word=w(z), generators=xs))
    a, b = [(1,)], [(2,)]
    for z in ("a^3 b^-2", "b a"):
        d = decide_double_coset(F2, a, b, w(z, F2), B)
        out.append(decision_certificate("dcoset", F2, d, word=w(z, F2), left=a, right=b))
    z1 = load("Z")
    for y in ("a^3", "a^4"):
        r = coset_intersection_witness(z1, [(1, 1)], [w(y, z1)], (1,), B)
        out.append(intersection_certificate(z1, [(1, 1)], [w(y, z1)], (1,), r))
    p, p2 = parse_presentation("< a | a^3 >"), parse_presentation("< x, y | x^3, y >")
    out.append(iso_certificate(p, p2, find_isomorphism(p, p2, B), 0))
    out.append(subgroups_certificate(F2, list(enum_finite_index_subgroups(F2, 3)), 3))
    return out


DOCS = _docs()


def test_emitted_certificates_verify():
    for doc in DOCS:
        assert verify_certificate(doc), doc["query"]


def test_presentation_must_match():
    assert not verify_certificate(DOCS[0], F2)
    assert verify_certificate(DOCS[0], Z2)


def test_json_round_trip_is_stable():
    for doc in DOCS:
        text = dumps(doc)
        assert dumps(json.loads(text)) == text
        assert verify_certificate(json.loads(text))


def test_witness_mutants_rejected():
    mutants = [m for doc in DOCS for m in witness_mutations(doc)]
    assert len(mutants) >= 10
    for label, m in mutants:
        assert not verify_certificate(m), label


def _oracle_valid(doc):
    """Judge a quotient certificate with the library's permutation code."""
    pres = parse_presentation(doc["query"]["presentation"])
    q = doc["quotient"]
    try:
        fq = FiniteQuotient(pres, q["degree"], [[x - 1 for x in img] for img in q["images"]])
    except ValueError:
        return False
    if not fq.kills_relators():
        return False
    qry = doc["query"]
    words = lambda key: [parse_word(s, pres) for s in qry.get(key, [])]
    if q["claim"] == "image_not_identity":
        return fq.image(parse_word(qry["word"], pres)) != tuple(range(fq.degree))
    if q["claim"] == "image_not_in_subgroup":
        return not subgroup_image_test(fq, words("generators"), parse_word(qry["word"], pres))
    if qry["kind"] == "dcoset":
        return not double_coset_image_test(fq, words("left"), words("right"), parse_word(qry["word"], pres))
    return not double_coset_image_test(fq, words("right"), words("left"), parse_word(qry["coset_rep"], pres))


def test_image_mutants_judged_by_oracle():
    for doc in DOCS:
        for label, m in image_mutations(doc):
            assert bool(verify_certificate(m)) == _oracle_valid(m), label


def test_malformed_documents_rejected():
    assert not verify_certificate({})
    assert not verify_certificate({"query": 3})
    doc = json.loads(dumps(DOCS[0]))
    doc["query"]["word"] = "q"
    assert not verify_certificate(doc)
    doc = json.loads(dumps(DOCS[0]))
    doc["quotient"]["images"][0] = [1, 1]
    assert not verify_certificate(doc)


@settings(max_examples=30)
@given(st.lists(words(2, 4).filter(bool), min_size=1, max_size=2), words(2, 5))
def test_free_group_certificates_verify(gens, z):
    d = decide_membership(F2, gens, z, Budget(50_000, 5))
    doc = decision_certificate("member", F2, d, word=z, generators=gens)
    if d.decided:
        assert verify_certificate(doc)
        assert all(not verify_certificate(m) for _, m in witness_mutations(doc))
