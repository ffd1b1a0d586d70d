"""Positive/negative semi-decision pairs, run as tasks (see ``enumeration``)."""

from __future__ import annotations

from typing import Optional, Sequence

from .enumeration import commutation_witness_search, race, witness_search
from .quotients import double_coset_image_test, quotient_stream
from .words import Presentation, Word


def first_quotient(stream, accept=None):
    """Task: first quotient in ``stream`` passing ``accept``; None if the stream ends."""
    for item in stream:
        yield None
        if item is not None and (accept is None or accept(item)):
            return item
    return None


def nontrivial_quotient_search(pres: Presentation, w: Word, max_degree: Optional[int]):
    return first_quotient(quotient_stream(pres, max_degree, moves=w))


def excluding_quotient_search(pres: Presentation, gens: Sequence[Word], z: Word, max_degree: Optional[int]):
    # gens fix point 0 and z moves it, so f(z) lies outside <f(gens)>
    return first_quotient(quotient_stream(pres, max_degree, stabilize=gens, moves=z))


def double_coset_quotient_search(pres, xs, ys, z, max_degree):
    return first_quotient(
        quotient_stream(pres, max_degree),
        accept=lambda q: not double_coset_image_test(q, xs, ys, z),
    )


def _label(tasks, positive, negative):
    # last task is the negative side
    idx_result = yield from race(tasks)
    if idx_result is None:
        return None
    idx, result = idx_result
    return (negative if idx == len(tasks) - 1 else positive, result)


def word_race(pres: Presentation, w: Word, max_degree: Optional[int]):
    """Task -> ("trivial", WitnessedElement) | ("nontrivial", FiniteQuotient) | None."""
    return _label(
        [
            witness_search(pres, (), w),
            commutation_witness_search(pres, (), w),
            nontrivial_quotient_search(pres, w, max_degree),
        ],
        "trivial",
        "nontrivial",
    )


def membership_race(pres: Presentation, gens: Sequence[Word], z: Word, max_degree: Optional[int]):
    """Task -> ("member", WitnessedElement) | ("non_member", FiniteQuotient) | None."""
    gens = tuple(tuple(g) for g in gens)
    return _label(
        [
            witness_search(pres, (gens,), z),
            commutation_witness_search(pres, (gens,), z),
            excluding_quotient_search(pres, gens, z, max_degree),
        ],
        "member",
        "non_member",
    )


def double_coset_race(pres, xs, ys, z, max_degree):
    """Task deciding z in <X><Y>; witness subgroup letters index into X + Y."""
    xs = tuple(tuple(g) for g in xs)
    ys = tuple(tuple(g) for g in ys)
    return _label(
        [
            witness_search(pres, (xs, ys), z),
            commutation_witness_search(pres, (xs, ys), z),
            double_coset_quotient_search(pres, xs, ys, z, max_degree),
        ],
        "member",
        "non_member",
    )
