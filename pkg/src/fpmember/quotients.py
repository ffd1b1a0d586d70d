"""Homomorphisms to symmetric groups and small permutation-group arithmetic.

Permutations are tuples in 0-based one-line notation.  Action is on the
right: ``compose(p, q)`` applies ``p`` first, then ``q``, and a word
``g1 g2`` sends a point ``i`` to ``(i . g1) . g2``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .words import Presentation, Word


def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    return tuple(q[i] for i in p)


def invert(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_perm(p: Sequence[int], n: Optional[int] = None) -> bool:
    return sorted(p) == list(range(len(p))) and (n is None or len(p) == n)


def word_image(images: Sequence[tuple], w: Sequence[int], degree: int) -> tuple:
    inv = {}
    cur = identity_perm(degree)
    for x in w:
        g = abs(x) - 1
        if x > 0:
            p = images[g]
        else:
            if g not in inv:
                inv[g] = invert(images[g])
            p = inv[g]
        cur = compose(cur, p)
    return cur


def trace_point(images: Sequence[tuple], w: Sequence[int], point: int) -> int:
    for x in w:
        p = images[abs(x) - 1]
        point = p[point] if x > 0 else p.index(point)
    return point


@dataclass(frozen=True)
class FiniteQuotient:
    """Generator images in S_n, optionally with a marked subgroup G0 (by generators)."""

    source: Presentation
    degree: int
    images: tuple
    marked_subgroup: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(p) for p in self.images))
        if len(self.images) != self.source.ngens:
            raise ValueError("one image per generator required")
        if not all(is_perm(p, self.degree) for p in self.images):
            raise ValueError("images must be permutations of the stated degree")
        if self.marked_subgroup is not None:
            object.__setattr__(self, "marked_subgroup", tuple(tuple(p) for p in self.marked_subgroup))

    def image(self, w: Sequence[int]) -> tuple:
        return word_image(self.images, w, self.degree)

    def kills_relators(self) -> bool:
        e = identity_perm(self.degree)
        return all(self.image(r) == e for r in self.source.relators)

    def image_group(self) -> "PermGroup":
        return perm_closure(self.images, self.degree)

    def with_marked(self, gens: Iterable[tuple]) -> "FiniteQuotient":
        return FiniteQuotient(self.source, self.degree, self.images, tuple(gens))


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple
    elements: tuple  # breadth-first discovery order, identity first

    def __contains__(self, p):
        return tuple(p) in self.element_set

    @property
    def element_set(self) -> frozenset:
        s = self.__dict__.get("_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_set", s)
        return s

    @property
    def order(self) -> int:
        return len(self.elements)


def perm_closure(gens: Iterable[Sequence[int]], degree: Optional[int] = None) -> PermGroup:
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree needed for an empty generator list")
        degree = len(gens[0])
    if any(len(g) != degree or not is_perm(g) for g in gens):
        raise ValueError("degree mismatch")
    e = identity_perm(degree)
    order = [e]
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    group = PermGroup(degree, tuple(gens), tuple(order))
    object.__setattr__(group, "_set", frozenset(seen))
    return group


def perm_coset_reps(group: PermGroup, sub: Iterable[Sequence[int]]) -> list:
    """One representative per left coset gH, in first-seen order."""
    sub = [tuple(h) for h in sub]
    hset = set(sub)
    if not hset:
        raise ValueError("subgroup must contain the identity")
    for a in sub:
        for b in sub:
            if compose(a, b) not in hset:
                raise ValueError("subgroup is not closed")
    if not hset <= group.element_set:
        raise ValueError("subgroup is not contained in the group")
    covered = set()
    reps = []
    for g in group.elements:
        if g in covered:
            continue
        reps.append(g)
        covered.update(compose(g, h) for h in sub)
    return reps


def enum_sym_homs(pres: Presentation, n: int) -> list:
    """All homomorphisms to S_n, by brute force over |S_n|^|A| assignments."""
    if n < 1:
        raise ValueError("degree must be positive")
    perms = list(itertools.permutations(range(n)))
    e = identity_perm(n)
    out = []
    for imgs in itertools.product(perms, repeat=pres.ngens):
        if all(word_image(imgs, r, n) == e for r in pres.relators):
            out.append(FiniteQuotient(pres, n, imgs))
    return out


# ---------------------------------------------------------------------------
# transitive representations (point stabilizers of finite-index subgroups)


def _cols(w: Sequence[int]) -> list:
    return [2 * (abs(x) - 1) + (1 if x < 0 else 0) for x in w]


def transitive_tables(
    pres: Presentation,
    degree: int,
    stabilize: Sequence[Word] = (),
    moves: Optional[Word] = None,
) -> Iterator:
    """Stream over complete coset tables of transitive actions on ``degree`` points.

    Yields ``None`` once per search node and a finished table (list of rows,
    one column per letter ``g, g^-1``) for every action in which all relators
    hold at every point, every word in ``stabilize`` fixes point 0 and, if
    given, ``moves`` does not fix point 0.  Tables are in standard form, so
    each subgroup of index ``degree`` appears exactly once.
    """
    m = pres.ngens
    ncols = 2 * m
    if m == 0:
        if degree == 1 and moves is None:
            yield [[]]
        return
    rels = [_cols(r) for r in pres.relators]
    stab = [_cols(w) for w in stabilize if w]
    mv = _cols(moves) if moves is not None else None
    if mv is not None and not mv:
        return
    table = [[-1] * ncols for _ in range(degree)]
    trail = []

    def define(p, c, q):
        table[p][c] = q
        table[q][c ^ 1] = p
        trail.append((p, c))
        trail.append((q, c ^ 1))

    def scan(word, s, e):
        # returns False on conflict, True if something was deduced, None otherwise
        f, i, n = s, 0, len(word)
        while i < n:
            nxt = table[f][word[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        if i == n:
            return None if f == e else False
        b, j = e, n - 1
        while j >= i:
            nxt = table[b][word[j] ^ 1]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j < i:
            return None if f == b else False
        if j == i:
            c = word[i]
            if table[f][c] >= 0 or table[b][c ^ 1] >= 0:
                return False
            define(f, c, b)
            return True
        return None

    def deduce(nact):
        changed = True
        while changed:
            changed = False
            for w in stab:
                r = scan(w, 0, 0)
                if r is False:
                    return False
                changed |= bool(r)
            for p in range(nact):
                for w in rels:
                    r = scan(w, p, p)
                    if r is False:
                        return False
                    changed |= bool(r)
        return True

    def fixes_zero(word):
        f = 0
        for c in word:
            f = table[f][c]
            if f < 0:
                return None
        return f == 0

    def undo(mark):
        while len(trail) > mark:
            p, c = trail.pop()
            table[p][c] = -1

    def search(nact):
        yield None
        if mv is not None and fixes_zero(mv):
            return
        for p in range(nact):
            row = table[p]
            for c in range(ncols):
                if row[c] < 0:
                    break
            else:
                continue
            break
        else:
            if nact == degree:
                if mv is None or fixes_zero(mv) is False:
                    yield [list(r) for r in table]
            return
        options = [q for q in range(nact) if table[q][c ^ 1] < 0]
        if nact < degree:
            options.append(nact)
        for q in options:
            mark = len(trail)
            new = nact + 1 if q == nact else nact
            define(p, c, q)
            if deduce(new):
                yield from search(new)
            undo(mark)

    mark = len(trail)
    if deduce(1):
        yield from search(1)
    undo(mark)


def table_to_quotient(pres: Presentation, table, marked: bool = True) -> FiniteQuotient:
    n = len(table)
    images = tuple(tuple(table[p][2 * g] for p in range(n)) for g in range(pres.ngens))
    q = FiniteQuotient(pres, n, images)
    if marked:
        q = q.with_marked(stabilizer_generators(q, 0))
    return q


def stabilizer_generators(q: FiniteQuotient, point: int = 0) -> list:
    """Schreier generators of the stabilizer of ``point`` in the image group."""
    n = q.degree
    invs = [invert(p) for p in q.images]
    reps = {point: identity_perm(n)}
    queue = deque([point])
    letters = []
    for g in range(len(q.images)):
        letters.append(q.images[g])
        letters.append(invs[g])
    while queue:
        x = queue.popleft()
        for p in letters:
            y = p[x]
            if y not in reps:
                reps[y] = compose(reps[x], p)
                queue.append(y)
    e = identity_perm(n)
    gens = []
    seen = set()
    for x, r in reps.items():
        for p in letters:
            s = compose(compose(r, p), invert(reps[p[x]]))
            if s != e and s not in seen:
                seen.add(s)
                gens.append(s)
    return gens


def quotient_stream(
    pres: Presentation,
    max_degree: Optional[int] = None,
    stabilize: Sequence[Word] = (),
    moves: Optional[Word] = None,
    min_degree: int = 1,
) -> Iterator:
    """Transitive quotients in increasing degree; ``None`` items mark search steps."""
    n = min_degree
    while max_degree is None or n <= max_degree:
        for item in transitive_tables(pres, n, stabilize, moves):
            yield None if item is None else table_to_quotient(pres, item)
        n += 1


def double_coset_image_test(q: FiniteQuotient, xs: Sequence[Word], ys: Sequence[Word], z: Word) -> bool:
    """Is the image of z in <f(X)> <f(Y)> ?"""
    n = q.degree
    a = perm_closure([q.image(x) for x in xs], n)
    b = perm_closure([q.image(y) for y in ys], n)
    zi = q.image(z)
    bset = b.element_set
    return any(compose(invert(g), zi) in bset for g in a.elements)


def subgroup_image_test(q: FiniteQuotient, xs: Sequence[Word], z: Word) -> bool:
    """Is the image of z in <f(X)> ?"""
    zi = q.image(z)
    imgs = [q.image(x) for x in xs]
    for p in range(q.degree):
        if all(g[p] == p for g in imgs) and zi[p] != p:
            return False
    return zi in perm_closure(imgs, q.degree)


def find_separating_quotient(pres, gens, budget):
    from .cosets import find_separating_quotient as _find

    return _find(pres, gens, budget)
