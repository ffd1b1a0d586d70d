"""Coset tables of quotient preimages and the Reidemeister-Schreier process."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .enumeration import Budget, Exhausted, drive, witness_search, race
from .quotients import (
    FiniteQuotient,
    compose,
    identity_perm,
    invert,
    perm_closure,
    quotient_stream,
    stabilizer_generators,
)
from .races import membership_race
from .words import GeneratorMap, Presentation, Word, inverse, join


@dataclass(frozen=True)
class CosetTable:
    """Right cosets of f^-1(G0), coset 0 being the subgroup itself.

    ``action[i][c]`` is the coset reached from coset ``i`` by letter column
    ``c`` (column ``2g`` is generator ``g``, ``2g + 1`` its inverse).
    """

    base: Presentation
    quotient: FiniteQuotient
    reps: tuple
    action: tuple

    @property
    def index(self) -> int:
        return len(self.reps)


def _col(x: int) -> int:
    return 2 * (abs(x) - 1) + (1 if x < 0 else 0)


def _letter(c: int) -> int:
    return (c // 2 + 1) * (-1 if c % 2 else 1)


def coset_table(pres: Presentation, q: FiniteQuotient, point: Optional[int] = None) -> CosetTable:
    """Coset table of the preimage of the marked subgroup.

    With ``point`` given, the marked subgroup is taken to be the stabilizer of
    that point and cosets are identified with points of its orbit.
    """
    if q.source != pres:
        raise ValueError("quotient is not defined on this presentation")
    n = q.degree
    images = []
    for p in q.images:
        images.append(p)
        images.append(invert(p))
    if point is not None:
        start = point

        def step(key, c):
            return images[c][key]

    else:
        if q.marked_subgroup is None:
            raise ValueError("quotient has no marked subgroup")
        g0 = perm_closure(q.marked_subgroup, n)

        def canon(g):
            return min(compose(h, g) for h in g0.elements)

        start = canon(identity_perm(n))

        def step(key, c):
            return canon(compose(key, images[c]))

    index = {start: 0}
    reps = [()]
    keys = [start]
    rows = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        row = []
        for c in range(len(images)):
            k = step(keys[i], c)
            if k not in index:
                index[k] = len(keys)
                keys.append(k)
                reps.append(reps[i] + (_letter(c),))
                queue.append(index[k])
            row.append(index[k])
        rows.append(row)
    if point is not None and q.marked_subgroup is None:
        q = q.with_marked(stabilizer_generators(q, point))
    return CosetTable(pres, q, tuple(reps), tuple(tuple(r) for r in rows))


def coset_rep_of(t: CosetTable, w: Sequence[int], start: int = 0) -> int:
    i = start
    for x in w:
        i = t.action[i][_col(x)]
    return i


@dataclass(frozen=True)
class SchreierData:
    presentation: Presentation
    embedding: GeneratorMap
    labels: tuple  # (coset, generator) per Schreier generator
    lookup: dict = field(compare=False)

    def rewrite(self, t: CosetTable, w: Sequence[int], start: int = 0):
        """Rewrite ``w`` read from coset ``start`` into Schreier generators.

        Returns ``(word, end_coset)``; the word is freely reduced.
        """
        out: tuple = ()
        i = start
        for x in w:
            g = abs(x) - 1
            if x > 0:
                j = t.action[i][2 * g]
                k = self.lookup.get((i, g))
                if k is not None:
                    out = join(out, (k + 1,))
                i = j
            else:
                j = t.action[i][2 * g + 1]
                k = self.lookup.get((j, g))
                if k is not None:
                    out = join(out, (-(k + 1),))
                i = j
        return out, i


def _tree_pairs(t: CosetTable) -> set:
    tree = set()
    for j in range(1, t.index):
        rep = t.reps[j]
        parent = coset_rep_of(t, rep[:-1])
        x = rep[-1]
        g = abs(x) - 1
        if x > 0:
            tree.add((parent, g))
        else:
            tree.add((j, g))
    return tree


def reidemeister_schreier(t: CosetTable, name: Optional[str] = None):
    """Presentation of the subgroup on Schreier generators, and its embedding.

    Returns ``(presentation, embedding, schreier_data)``.
    """
    base = t.base
    tree = _tree_pairs(t)
    labels = []
    words = []
    lookup = {}
    for i in range(t.index):
        for g in range(base.ngens):
            if (i, g) in tree:
                continue
            lookup[(i, g)] = len(labels)
            labels.append((i, g))
            j = t.action[i][2 * g]
            words.append(join(join(t.reps[i], (g + 1,)), inverse(t.reps[j])))
    gen_names = tuple(f"x{k + 1}" for k in range(len(labels)))
    data = SchreierData(None, None, tuple(labels), lookup)
    rels = []
    for i in range(t.index):
        for r in base.relators:
            w, _ = data.rewrite(t, r, i)
            if w:
                rels.append(w)
    pres = Presentation(gen_names, tuple(rels), name or f"{base.name or 'G'}_sub{t.index}")
    emb = GeneratorMap(pres, base, tuple(words))
    data = SchreierData(pres, emb, tuple(labels), lookup)
    return pres, emb, data


def intersect_with_finite_index(t: CosetTable, gens: Sequence[Word]):
    """For H = <gens>, coset representatives of H ∩ P0 in H and generators of H ∩ P0.

    P0 is the subgroup described by ``t``.  Representatives are returned as
    words in the ambient alphabet together with the coset they reach, and as
    words in ``gens`` (pairs ``(index, sign)``).
    """
    gens = [tuple(g) for g in gens]
    reach = {0: ((), ())}
    order = [0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for k, g in enumerate(gens):
            for sign in (1, -1):
                w = g if sign > 0 else inverse(g)
                j = coset_rep_of(t, w, i)
                if j not in reach:
                    word, letters = reach[i]
                    reach[j] = (join(word, w), letters + ((k, sign),))
                    order.append(j)
                    queue.append(j)
    sub_gens = []
    seen = set()
    for i in order:
        word_i, _ = reach[i]
        for k, g in enumerate(gens):
            j = coset_rep_of(t, g, i)
            s = join(join(word_i, g), inverse(reach[j][0]))
            if s and s not in seen:
                seen.add(s)
                sub_gens.append(s)
    reps = [(reach[i][0], reach[i][1], i) for i in order]
    return reps, sub_gens


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparatingCertificate:
    """<X> == f^-1(G0): Schreier generators lie in <X, <<R>>> and X rewrites exactly."""

    quotient: FiniteQuotient
    table: CosetTable
    subgroup: Presentation
    embedding: GeneratorMap
    schreier_witnesses: tuple  # WitnessedElement over X per Schreier generator
    x_rewrites: tuple  # each X word as a word in the Schreier generators

    @property
    def coset_reps(self) -> tuple:
        return self.table.reps

    def check(self, pres: Presentation, gens: Sequence[Word]) -> bool:
        gens = [tuple(g) for g in gens]
        if not self.quotient.kills_relators():
            return False
        if len(self.schreier_witnesses) != len(self.embedding.images):
            return False
        for w, img in zip(self.schreier_witnesses, self.embedding.images):
            if w.word != img or not w.check(pres, gens):
                return False
        for x, rw in zip(gens, self.x_rewrites):
            if self.embedding(rw) != x:
                return False
        return True


def _candidate_task(pres, gens, q, max_degree):
    t = coset_table(pres, q, point=0)
    sub, emb, data = reidemeister_schreier(t)
    witnesses = []
    for s in emb.images:
        res = yield from membership_race(pres, gens, s, max_degree)
        if res is None or res[0] != "member":
            return None
        witnesses.append(res[1])
    rewrites = []
    for x in gens:
        w, end = data.rewrite(t, x)
        if end != 0:
            return None
        rewrites.append(w)
    return SeparatingCertificate(t.quotient, t, sub, emb, tuple(witnesses), tuple(rewrites))


def separating_quotient_task(pres: Presentation, gens: Sequence[Word], max_degree: Optional[int]):
    """Task: a quotient f and G0 with <gens> == f^-1(G0), certified.

    Candidates are the transitive actions in which every generator fixes
    point 0; each candidate is checked by a membership race per Schreier
    generator, and candidates are interleaved round robin so a slow one
    cannot starve the rest.
    """
    gens = tuple(tuple(g) for g in gens)
    stream = quotient_stream(pres, max_degree, stabilize=gens)
    active = []
    stream_live = True
    while stream_live or active:
        if stream_live:
            try:
                item = next(stream)
            except StopIteration:
                stream_live = False
                item = None
            yield None
            if item is not None:
                active.append(_candidate_task(pres, gens, item, max_degree))
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


def find_separating_quotient(pres: Presentation, gens: Sequence[Word], budget: Budget):
    """Returns a :class:`SeparatingCertificate` or :class:`Exhausted`."""
    result, steps = drive(separating_quotient_task(pres, gens, budget.max_quotient_degree), budget)
    return result
