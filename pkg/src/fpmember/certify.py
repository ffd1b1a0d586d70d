"""Certification searches: isomorphisms, retractions, equal subgroups,
normality, quotient identification and finite-index subgroup lists.

Every search is sound whatever the input; success depends on the budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .cosets import CosetTable, SchreierData, coset_table, reidemeister_schreier
from .enumeration import Budget, Exhausted, WitnessedElement, drive, witness_search
from .quotients import FiniteQuotient, compose, identity_perm, invert, quotient_stream, word_image
from .races import word_race
from .words import (
    GeneratorMap,
    GeneratorSet,
    Presentation,
    Word,
    inverse,
    join,
    letter,
    reduced_words,
    substitute_words,
)

FILTER_DEGREE = 6


def all_of(tasks: Sequence):
    """Task: run subtasks round robin until all finish; None if any gives up."""
    tasks = list(tasks)
    results = [None] * len(tasks)
    live = list(range(len(tasks)))
    while live:
        for idx in list(live):
            try:
                next(tasks[idx])
            except StopIteration as stop:
                if stop.value is None:
                    for j in live:
                        if j != idx:
                            tasks[j].close()
                    return None
                results[idx] = stop.value
                live.remove(idx)
                continue
            yield None
    return results


class QuotientCache:
    """Small transitive quotients of one presentation, computed lazily and shared."""

    def __init__(self, pres: Presentation, max_degree: int):
        self.pres = pres
        self.quotients = []
        self._stream = quotient_stream(pres, max_degree)
        self.complete = False

    def refutes(self, image_of):
        """Task: True if ``image_of(q)`` is not the identity for some cached quotient."""
        i = 0
        while True:
            # one step covers the whole cached batch
            if i < len(self.quotients):
                yield None
            while i < len(self.quotients):
                q = self.quotients[i]
                i += 1
                if image_of(q) != identity_perm(q.degree):
                    return True
            if self.complete:
                return False
            try:
                item = next(self._stream)
            except StopIteration:
                self.complete = True
                continue
            yield None
            if item is not None and item.degree > 1:
                self.quotients.append(item)


def _map_tuples(ngens_per_slot: Sequence[int]) -> Iterator[tuple]:
    """Tuples of reduced words, one per slot, by total length.

    Within a total length, length vectors come in descending lexicographic
    order and words in shortlex order.
    """
    k = len(ngens_per_slot)
    total = 0
    while True:
        any_possible = False
        for lengths in _vectors_desc(total, k):
            if any(l > 0 and ngens_per_slot[i] == 0 for i, l in enumerate(lengths)):
                continue
            any_possible = True
            yield from _product_words(ngens_per_slot, lengths)
        if not any_possible and total > 0:
            return
        total += 1


def _vectors_desc(total, k):
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _vectors_desc(total - first, k - 1):
            yield (first,) + rest


def _product_words(ngens, lengths):
    if not lengths:
        yield ()
        return
    for w in reduced_words(ngens[0], lengths[0]):
        for rest in _product_words(ngens[1:], lengths[1:]):
            yield (w,) + rest


@dataclass(frozen=True)
class MapPairCertificate:
    """A pair of maps with closure witnesses for the required identities.

    ``conditions`` holds ``(label, presentation_side, word, witness)`` where
    side 0 means the source presentation and side 1 the target.
    """

    forward: GeneratorMap
    backward: GeneratorMap
    conditions: tuple

    def check(self) -> bool:
        expected = _condition_words(self.forward, self.backward, self._kind)
        if len(expected) != len(self.conditions):
            return False
        sides = (self.forward.source, self.forward.target)
        for (label, side, word), (l2, s2, w2, wit) in zip(expected, self.conditions):
            if (label, side, word) != (l2, s2, w2):
                return False
            if wit.word != word or wit.subgroup_part or not wit.check(sides[side]):
                return False
        return True

    _kind = "iso"


@dataclass(frozen=True)
class IsoCertificate(MapPairCertificate):
    _kind = "iso"


@dataclass(frozen=True)
class RetractionCertificate(MapPairCertificate):
    _kind = "retraction"


def _condition_specs(f: GeneratorMap, g: GeneratorMap, kind: str) -> list:
    """``(label, side, shape, index)``; the word itself is built by :func:`_spec_word`."""
    src, tgt = f.source, f.target
    out = []
    for k in range(len(src.relators)):
        out.append((f"forward_relator_{k}", 1, "f", k))
    for k in range(len(tgt.relators)):
        out.append((f"backward_relator_{k}", 0, "g", k))
    for a in range(src.ngens):
        out.append((f"round_trip_source_{a}", 0, "gf", a))
    if kind == "iso":
        for b in range(tgt.ngens):
            out.append((f"round_trip_target_{b}", 1, "fg", b))
    return out


def _spec_word(f, g, spec) -> Word:
    _, _, shape, k = spec
    if shape == "f":
        return f(f.source.relators[k])
    if shape == "g":
        return g(g.source.relators[k])
    x = (letter(k),)
    if shape == "gf":
        return join(g(f(x)), inverse(x))
    return join(f(g(x)), inverse(x))


def _condition_words(f, g, kind) -> list:
    return [(spec[0], spec[1], _spec_word(f, g, spec)) for spec in _condition_specs(f, g, kind)]


def _spec_image(f, g, spec, q, memo):
    """Image of the condition word in ``q`` without expanding composite words."""
    _, side, shape, k = spec
    last = f if shape[0] == "f" else g  # map applied last; q lives on its target
    key = (id(q), shape[0])
    if key not in memo:
        memo[key] = [q.image(w) for w in last.images]
    gen_images = memo[key]
    if len(shape) == 1:
        return word_image(gen_images, last.source.relators[k], q.degree)
    first = g if shape[0] == "f" else f
    img = word_image(gen_images, first.images[k], q.degree)
    return compose(img, invert(q.images[k]))


def _filter_task(f, g, specs, caches):
    """Task: True if a cached small quotient already refutes some condition."""
    memo = {}
    for spec in specs:
        cache = caches[spec[1]]
        refuted = yield from cache.refutes(lambda q, spec=spec: _spec_image(f, g, spec, q, memo))
        if refuted:
            return True
    return False


def _pair_task(f, g, kind, conds, max_degree):
    sides = (f.source, f.target)
    witnesses = []
    for label, side, w in conds:
        res = yield from word_race(sides[side], w, max_degree)
        if res is None or res[0] != "trivial":
            return None
        witnesses.append((label, side, w, res[1]))
    cls = IsoCertificate if kind == "iso" else RetractionCertificate
    return cls(f, g, tuple(witnesses))


def _index_matching(p, p2, kind):
    """Candidate sending generator i to generator i both ways, tried first.

    Only offered when it is well formed: equal ranks for an isomorphism, and
    for a retraction a target at least as large (extra generators go to 1).
    """
    if p.ngens > p2.ngens or (kind == "iso" and p.ngens != p2.ngens):
        return None
    fwd = tuple((letter(i),) for i in range(p.ngens))
    bwd = tuple((letter(i),) if i < p.ngens else () for i in range(p2.ngens))
    return fwd + bwd


def _filtered_candidates(p, p2, kind, caches, progress):
    """Stream of candidate pairs not refuted by a cached quotient."""
    slots = [p2.ngens] * p.ngens + [p.ngens] * p2.ngens
    seed = _index_matching(p, p2, kind)
    stream = _map_tuples(slots)
    if seed is not None:
        stream = itertools.chain([seed], (t for t in stream if t != seed))
    for images in stream:
        progress["candidates_tried"] += 1
        f = GeneratorMap(p, p2, images[: p.ngens])
        g = GeneratorMap(p2, p, images[p.ngens:])
        refuted = yield from _filter_task(f, g, _condition_specs(f, g, kind), caches)
        yield None
        if not refuted:
            progress["candidates_raced"] += 1
            yield (f, g, _condition_words(f, g, kind))


def map_pair_search(p: Presentation, p2: Presentation, kind: str, max_degree: Optional[int], progress: dict):
    """Task: dovetail the candidate stream with the races of surviving candidates."""
    filt = FILTER_DEGREE if max_degree is None else min(FILTER_DEGREE, max_degree)
    caches = (QuotientCache(p, filt), QuotientCache(p2, filt))
    progress.setdefault("candidates_tried", 0)
    progress.setdefault("candidates_raced", 0)
    candidates = _filtered_candidates(p, p2, kind, caches, progress)
    active = []
    live = True
    while live or active:
        if live:
            try:
                item = next(candidates)
            except StopIteration:
                live = False
                item = None
            yield None
            if item is not None:
                f, g, conds = item
                active.append(_pair_task(f, g, kind, conds, max_degree))
        for task in list(active):
            try:
                next(task)
            except StopIteration as stop:
                active.remove(task)
                if stop.value is not None:
                    for other in active:
                        other.close()
                    return stop.value
                continue
            yield None
    return None


def _run(task_factory, budget: Budget):
    progress = {}
    result, steps = drive(task_factory(progress), budget)
    if isinstance(result, Exhausted):
        result.progress.update(progress)
    return result


def find_isomorphism(p: Presentation, p2: Presentation, budget: Budget):
    """An :class:`IsoCertificate` for p -> p2, or :class:`Exhausted`."""
    return _run(lambda prog: map_pair_search(p, p2, "iso", budget.max_quotient_degree, prog), budget)


def find_retraction(p: Presentation, p2: Presentation, budget: Budget):
    """Maps f: p -> p2 and g: p2 -> p with g . f the identity on p."""
    return _run(lambda prog: map_pair_search(p, p2, "retraction", budget.max_quotient_degree, prog), budget)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SameSubgroupCertificate:
    x_in_y: tuple  # WitnessedElement over Y for each x
    y_in_x: tuple

    def check(self, pres: Presentation, xs: Sequence[Word], ys: Sequence[Word]) -> bool:
        xs, ys = [tuple(x) for x in xs], [tuple(y) for y in ys]
        if len(self.x_in_y) != len(xs) or len(self.y_in_x) != len(ys):
            return False
        return all(w.word == x and w.check(pres, ys) for w, x in zip(self.x_in_y, xs)) and all(
            w.word == y and w.check(pres, xs) for w, y in zip(self.y_in_x, ys)
        )


def same_subgroup_task(pres, xs, ys):
    xs = tuple(tuple(x) for x in xs)
    ys = tuple(tuple(y) for y in ys)
    tasks = [witness_search(pres, (ys,), x) for x in xs] + [witness_search(pres, (xs,), y) for y in ys]
    res = yield from all_of(tasks)
    if res is None:
        return None
    return SameSubgroupCertificate(tuple(res[: len(xs)]), tuple(res[len(xs):]))


def certify_same_subgroup(pres: Presentation, xs, ys, budget: Budget):
    return _run(lambda prog: same_subgroup_task(pres, list(xs), list(ys)), budget)


@dataclass(frozen=True)
class NormalityCertificate:
    """``witnesses[(gen, sign, j)]``: a^sign x_j a^-sign as an element of <X, <<R>>>."""

    witnesses: tuple  # ((gen, sign, j), WitnessedElement)

    def check(self, pres: Presentation, xs: Sequence[Word]) -> bool:
        xs = [tuple(x) for x in xs]
        need = {(a, s, j) for a in range(pres.ngens) for s in (1, -1) for j in range(len(xs))}
        got = {}
        for key, w in self.witnesses:
            got[tuple(key)] = w
        if set(got) != need:
            return False
        for (a, s, j), w in got.items():
            c = (letter(a, s),)
            if w.word != join(join(c, xs[j]), inverse(c)) or not w.check(pres, xs):
                return False
        return True


def conjugation_targets(pres, xs):
    out = []
    for a in range(pres.ngens):
        for s in (1, -1):
            c = (letter(a, s),)
            for j, x in enumerate(xs):
                out.append(((a, s, j), join(join(c, x), inverse(c))))
    return out


def normality_task(pres, xs):
    xs = tuple(tuple(x) for x in xs)
    targets = conjugation_targets(pres, xs)
    res = yield from all_of([witness_search(pres, (xs,), w) for _, w in targets])
    if res is None:
        return None
    return NormalityCertificate(tuple((k, w) for (k, _), w in zip(targets, res)))


def certify_normal(pres: Presentation, xs, budget: Budget):
    return _run(lambda prog: normality_task(pres, list(xs)), budget)


@dataclass(frozen=True)
class QuotientIsoCertificate:
    """Gamma / <<X>> is isomorphic to Q; ``normality`` present when <X> itself is normal."""

    augmented: Presentation
    iso: IsoCertificate
    normality: Optional[NormalityCertificate] = None

    def check(self, pres, xs, q) -> bool:
        if self.normality is not None and not self.normality.check(pres, xs):
            return False
        return (
            self.augmented.structurally_equal(augmented_presentation(pres, xs))
            and self.iso.forward.source.structurally_equal(self.augmented)
            and self.iso.forward.target.structurally_equal(q)
            and self.iso.check()
        )


def augmented_presentation(pres: Presentation, xs) -> Presentation:
    rels = list(pres.relators) + [tuple(x) for x in xs if x]
    return Presentation(pres.generators, tuple(rels), f"{pres.name or 'G'}_quot")


def quotient_iso_task(pres, xs, q, max_degree, progress, require_normal=False):
    aug = augmented_presentation(pres, xs)
    if require_normal:
        res = yield from all_of([normality_task(pres, xs), map_pair_search(aug, q, "iso", max_degree, progress)])
        if res is None:
            return None
        return QuotientIsoCertificate(aug, res[1], res[0])
    # normality is attached only if it is certified before the isomorphism
    normal = normality_task(pres, xs)
    iso_task = map_pair_search(aug, q, "iso", max_degree, progress)
    found_normal = None
    while True:
        if normal is not None:
            try:
                next(normal)
            except StopIteration as stop:
                found_normal = stop.value
                normal = None
            yield None
        try:
            next(iso_task)
        except StopIteration as stop:
            if stop.value is None:
                return None
            if normal is not None:
                normal.close()
            return QuotientIsoCertificate(aug, stop.value, found_normal)
        yield None


def certify_quotient_iso(pres: Presentation, xs, q: Presentation, budget: Budget, require_normal: bool = False):
    """Certify that the quotient by the normal closure of X is isomorphic to Q.

    With ``require_normal`` the certificate must also show that <X> is
    normal, so the quotient is by <X> itself.
    """
    return _run(
        lambda prog: quotient_iso_task(pres, list(xs), q, budget.max_quotient_degree, prog, require_normal),
        budget,
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupEntry:
    presentation: Presentation
    embedding: GeneratorMap
    index: int
    source_quotient: FiniteQuotient
    table: CosetTable = field(compare=False, repr=False)
    schreier: SchreierData = field(compare=False, repr=False)

    def generators(self) -> GeneratorSet:
        return GeneratorSet(self.embedding.target, self.embedding.images)


def subgroup_entry(pres: Presentation, q: FiniteQuotient) -> SubgroupEntry:
    """Finite-index subgroup: the preimage of the stabilizer of point 0."""
    t = coset_table(pres, q, point=0)
    sub, emb, data = reidemeister_schreier(t)
    return SubgroupEntry(sub, emb, t.index, t.quotient, t, data)


def enum_finite_index_subgroups(pres: Presentation, max_degree: Optional[int] = None) -> Iterator[SubgroupEntry]:
    """Every finite-index subgroup, once per index, in increasing index.

    Each subgroup of index n is the stabilizer of point 0 in exactly one
    standard transitive action of degree n.
    """
    for q in quotient_stream(pres, max_degree):
        if q is not None:
            yield subgroup_entry(pres, q)
