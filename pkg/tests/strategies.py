from hypothesis import strategies as st

from fpmember.words import free_reduce


def letters(ngens):
    return st.integers(1, ngens).flatmap(lambda g: st.sampled_from((g, -g)))


def raw_words(ngens, max_size=12):
    return st.lists(letters(ngens), max_size=max_size).map(tuple)


def words(ngens, max_size=12):
    return raw_words(ngens, max_size).map(free_reduce)
