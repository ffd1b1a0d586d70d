import pytest
from hypothesis import given

from fpmember.words import (
    GeneratorMap,
    Presentation,
    commutator,
    free_reduce,
    identity_map,
    inverse,
    is_reduced,
    join,
    power,
    reduced_words,
    substitute,
)
from strategies import raw_words, words

A, B = 1, 2


def test_free_reduce_examples():
    assert free_reduce((A, -A, B)) == (B,)
    assert free_reduce(()) == ()
    assert free_reduce((A, B, -B, A)) == (A, A)


def test_substitute_examples():
    src = Presentation(("a", "b"), ())
    tgt = Presentation(("x", "y"), ())
    m = GeneratorMap(src, tgt, ((1, 2), (-2,)))
    assert substitute(m, (A, B)) == (1,)
    w = (A, -B, A, A)
    assert substitute(identity_map(src), w) == w
    same = GeneratorMap(src, src, ((B,), (B,)))
    assert substitute(same, (A, A, A)) == (B, B, B)


def test_presentation_rejects_bad_letters():
    with pytest.raises(ValueError):
        Presentation(("a",), ((2,),))


def test_reduced_words_count():
    # 4 * 3^(n-1) reduced words of length n on two generators
    for n in range(1, 5):
        ws = list(reduced_words(2, n))
        assert len(ws) == 4 * 3 ** (n - 1)
        assert len(set(ws)) == len(ws)
        assert all(is_reduced(w) for w in ws)


@given(raw_words(3))
def test_free_reduce_is_idempotent(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r


@given(words(3), words(3), words(3))
def test_join_associative(u, v, w):
    assert join(join(u, v), w) == join(u, join(v, w))


@given(words(3))
def test_inverse(w):
    assert inverse(inverse(w)) == w
    assert join(w, inverse(w)) == ()


@given(words(2), words(2))
def test_commutator_inverse(u, v):
    assert inverse(commutator(u, v)) == commutator(v, u)


@given(words(2))
def test_power_laws(w):
    assert power(w, 0) == ()
    assert join(power(w, 3), power(w, -2)) == w
