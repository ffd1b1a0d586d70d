"""Fair, deterministic enumeration of normal closures and subgroup joins.

Two kinds of producers live here:

* streams (plain generators of items) such as :func:`enum_normal_closure`,
  merged fairly by :func:`dovetail`;
* tasks: generators that ``yield None`` once per logical step and finally
  ``return`` a result (``None`` meaning "gave up").  Every step of a task is
  one unit of :class:`Budget`.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .words import (
    Presentation,
    free_reduce,
    Word,
    inverse,
    join,
    reduced_words,
    substitute_words,
)


@dataclass(frozen=True)
class Budget:
    max_steps: int
    max_quotient_degree: Optional[int] = None

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be nonnegative")


@dataclass(frozen=True)
class WitnessedElement:
    """An element of <X, <<R>>> <= F(A) together with how it was built.

    ``subgroup_part`` is a word in the generator set: pairs ``(index, sign)``.
    ``closure_part`` lists ``(conjugator, relator_index, sign)`` factors.
    """

    word: Word
    subgroup_part: tuple = ()
    closure_part: tuple = ()

    def evaluate(self, pres: Presentation, gens: Sequence[Word] = ()) -> Word:
        return evaluate_witness(pres, gens, self.subgroup_part, self.closure_part)

    def check(self, pres: Presentation, gens: Sequence[Word] = ()) -> bool:
        try:
            return self.evaluate(pres, gens) == tuple(self.word)
        except (IndexError, ValueError):
            return False


def evaluate_witness(pres, gens, subgroup_part, closure_part) -> Word:
    out: Word = ()
    for idx, sign in subgroup_part:
        if sign not in (1, -1) or not 0 <= idx < len(gens):
            raise ValueError("bad subgroup letter")
        w = tuple(gens[idx])
        out = join(out, w if sign > 0 else inverse(w))
    for conj, ridx, sign in closure_part:
        if sign not in (1, -1) or not 0 <= ridx < len(pres.relators):
            raise ValueError("bad closure factor")
        conj = pres.check_word(conj)
        r = pres.relators[ridx]
        out = join(out, join(join(conj, r if sign > 0 else inverse(r)), inverse(conj)))
    return out


def _closure_products(pres: Presentation, size: int):
    """Closure parts of exactly ``size`` = factors + total conjugator length."""
    nrel = len(pres.relators)
    if size == 0:
        yield ()
        return
    if nrel == 0:
        return
    for k in range(1, size + 1):
        for lengths in _compositions(size - k, k):
            choices = [
                [(c, j, s) for c in reduced_words(pres.ngens, n) for j in range(nrel) for s in (1, -1)]
                for n in lengths
            ]
            yield from itertools.product(*choices)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enum_subgroup_join(pres: Presentation, gens: Sequence[Word] = ()) -> Iterator[WitnessedElement]:
    """Every element of <X, <<R>>> <= F(A), each emitted once with a witness.

    Candidates are ordered by size (subgroup-part length + closure factors +
    conjugator lengths) and lexicographically within a size.
    """
    gens = [tuple(g) for g in gens]
    finite = not pres.relators and all(not g for g in gens)
    seen = set()
    size = 0
    while True:
        for ulen in range(size + 1):
            for u in reduced_words(len(gens), ulen):
                upart = tuple((abs(x) - 1, 1 if x > 0 else -1) for x in u)
                for cpart in _closure_products(pres, size - ulen):
                    w = evaluate_witness(pres, gens, upart, cpart)
                    if w not in seen:
                        seen.add(w)
                        yield WitnessedElement(w, upart, cpart)
        if finite:
            return
        size += 1


def enum_normal_closure(pres: Presentation) -> Iterator[WitnessedElement]:
    return enum_subgroup_join(pres, ())


def dovetail(streams: Sequence[Iterable], budget: Budget) -> Iterator[tuple]:
    """Round-robin merge: logical step t advances the next live stream once."""
    if not streams:
        raise ValueError("dovetail needs at least one stream")
    iters = [iter(s) for s in streams]
    live = list(range(len(iters)))
    steps = 0
    pos = 0
    while live and steps < budget.max_steps:
        idx = live[pos % len(live)]
        try:
            item = next(iters[idx])
        except StopIteration:
            live.remove(idx)
            if live:
                pos %= len(live)
            continue
        steps += 1
        yield idx, item
        pos = (live.index(idx) + 1) % len(live)


# ---------------------------------------------------------------------------
# tasks


class Exhausted:
    """Returned in place of a result when the budget ran out."""

    def __init__(self, steps_used: int, progress: Optional[dict] = None):
        self.steps_used = steps_used
        self.progress = progress or {}

    def __repr__(self):
        return f"Exhausted(steps_used={self.steps_used})"

    def __bool__(self):
        return False


def drive(task, budget: Budget):
    """Run a task to completion or until the budget is spent.

    Returns ``(result, steps)``; result is ``Exhausted`` when out of budget.
    """
    steps = 0
    try:
        while True:
            if steps >= budget.max_steps:
                task.close()
                return Exhausted(steps), steps
            next(task)
            steps += 1
    except StopIteration as stop:
        result = stop.value
        if result is None:
            return Exhausted(steps, {"gave_up": True}), steps
        return result, steps


def race(tasks: Sequence):
    """Task: advance subtasks round robin; return ``(index, result)`` of the first
    to produce a non-None result, or None when every subtask gave up."""
    tasks = list(tasks)
    live = list(range(len(tasks)))
    pos = 0
    while live:
        idx = live[pos % len(live)]
        try:
            next(tasks[idx])
        except StopIteration as stop:
            if stop.value is not None:
                for j in live:
                    if j != idx:
                        tasks[j].close()
                return idx, stop.value
            live.remove(idx)
            if live:
                pos %= len(live)
            continue
        yield None
        pos = (live.index(idx) + 1) % len(live)
    return None


def sequence_all(tasks: Iterable, stop_on=None):
    """Task: run tasks one after another, collecting results.

    Stops early (returning the partial list) if ``stop_on(result)`` is true
    or a task gives up.
    """
    results = []
    for t in tasks:
        r = yield from t
        results.append(r)
        if r is None or (stop_on is not None and stop_on(r)):
            return results
    return results


def _relator_variants(pres: Presentation):
    """Cyclic rotations of every relator and its inverse.

    Each entry is ``(variant, u, index, sign)`` with variant = u^-1 r^sign u.
    """
    out = []
    seen = set()
    for j, r in enumerate(pres.relators):
        for sign in (1, -1):
            w = r if sign > 0 else inverse(r)
            for k in range(len(w)):
                u = w[:k]
                v = join(join(inverse(u), w), u)
                if v and v not in seen:
                    seen.add(v)
                    out.append((v, u, j, sign))
    return out


def witness_search(pres: Presentation, phases: Sequence[Sequence[Word]], target: Word):
    """Task: find ``target = U . C`` with U a word in the generator sets and C in <<R>>.

    ``phases`` is a list of generator sets; the letters of U must come from
    them in order (all of phase 0, then phase 1, ...).  With no phases this is
    the positive half of the word problem.

    The search is best-first over left multiplications of the remaining word
    by generator letters or conjugates of relators, with priority moves made +
    remaining length.  Any bound on that priority leaves finitely many states,
    so every decomposition is eventually reached.
    """
    gens = [tuple(g) for ph in phases for g in ph]
    phase_of = [p for p, ph in enumerate(phases) for _ in ph]
    variants = _relator_variants(pres)
    xmoves = []
    for i, g in enumerate(gens):
        for sign in (1, -1):
            left = inverse(g) if sign > 0 else g
            xmoves.append((i, sign, left))
    target = tuple(target)
    start = (target, 0)
    nodes = [(None, None, target, 0)]
    seen = {start}
    heap = [(len(target), 0, 0, 0)]
    counter = itertools.count(1)
    if not target:
        return _assemble(pres, gens, nodes, 0, target)
    while heap:
        _, _, ni, depth = heapq.heappop(heap)
        _, _, s, phase = nodes[ni]
        succ = []
        for i, sign, left in xmoves:
            if phase_of[i] < phase:
                continue
            succ.append((join(left, s), phase_of[i], ("x", i, sign)))
        for k in range(len(s) + 1 if variants else 0):
            prefix, suffix = s[:k], s[k:]
            for v, u, j, sign in variants:
                s2 = join(join(prefix, v), suffix)
                succ.append((s2, phase, ("r", prefix, u, j, sign)))
        for s2, ph2, move in succ:
            yield None
            key = (s2, ph2)
            if key in seen:
                continue
            seen.add(key)
            nodes.append((ni, move, s2, ph2))
            nid = len(nodes) - 1
            if not s2:
                return _assemble(pres, gens, nodes, nid, target)
            heapq.heappush(heap, (depth + 1 + len(s2), next(counter), nid, depth + 1))
    return None


def _commuting_pairs(pres: Presentation) -> dict:
    """Commutators of two generator letters that are cyclic variants of a relator.

    Maps the 4-letter word p q p^-1 q^-1 to ``(u, index, sign)`` as in
    :func:`_relator_variants`.
    """
    out = {}
    for v, u, j, sign in _relator_variants(pres):
        if len(v) == 4 and v[2] == -v[0] and v[3] == -v[1] and abs(v[0]) != abs(v[1]):
            out.setdefault(v, (u, j, sign))
    return out


def _shorten(coords, basis):
    """Coordinates of the same vector with smaller L1 norm, moving along the left kernel."""
    from .abelian import smith_normal_form

    snf = smith_normal_form([list(r) for r in basis])
    rank = sum(1 for x in snf.diagonal if x)
    kernel = [list(row) for row in snf.U[rank:]]
    best = list(coords)
    improved = True
    while improved:
        improved = False
        for k in kernel:
            for step in (1, -1):
                trial = [c - step * x for c, x in zip(best, k)]
                while sum(map(abs, trial)) < sum(map(abs, best)):
                    best = trial
                    improved = True
                    trial = [c - step * x for c, x in zip(best, k)]
    return tuple(best)


def commutation_witness_search(pres: Presentation, phases: Sequence[Sequence[Word]], target: Word):
    """Task: a witness guessed from the abelianization, or None.

    The subgroup word and relator powers are read off integer coordinates of
    ``target`` in the abelianized span; the leftover word is then sorted by
    generator using commutator relators, each swap recording one relator
    conjugate.  Gives up when no coordinates exist or sorting leaves a
    nonempty word.
    """
    from .abelian import lattice_membership

    gens = [tuple(g) for ph in phases for g in ph]
    n = pres.ngens

    def sums(w):
        v = [0] * n
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    basis = [sums(g) for g in gens] + [sums(r) for r in pres.relators]
    coords = lattice_membership(basis, sums(target)) if basis else (() if not target else None)
    yield None
    if not coords and coords != ():
        return None
    coords = _shorten(coords, basis)
    upart, cpart = [], []
    word: Word = ()
    for i, c in enumerate(coords[: len(gens)]):
        sign = 1 if c > 0 else -1
        for _ in range(abs(c)):
            upart.append((i, sign))
            word = join(word, gens[i] if sign > 0 else inverse(gens[i]))
    for j, d in enumerate(coords[len(gens):]):
        sign = 1 if d > 0 else -1
        r = pres.relators[j] if sign > 0 else inverse(pres.relators[j])
        for _ in range(abs(d)):
            cpart.append(((), j, sign))
            word = join(word, r)
    swaps = _commuting_pairs(pres)
    s = join(inverse(word), tuple(target))
    while s:
        for k in range(len(s) - 1):
            p, q = s[k], s[k + 1]
            if abs(p) > abs(q) and (p, q, -p, -q) in swaps:
                break
        else:
            return None
        u, j, sign = swaps[(p, q, -p, -q)]
        # s = prefix [p,q] q p suffix
        cpart.append((join(s[:k], inverse(u)), j, sign))
        s = free_reduce(s[:k] + (q, p) + s[k + 2 :])
        yield None
    return WitnessedElement(tuple(target), tuple(upart), tuple(cpart))


def _assemble(pres, gens, nodes, nid, target) -> WitnessedElement:
    moves = []
    while nodes[nid][0] is not None:
        moves.append(nodes[nid][1])
        nid = nodes[nid][0]
    moves.reverse()
    # target = M_1^-1 ... M_k^-1; move subgroup letters to the front
    upart = []
    cpart = []
    for m in moves:
        if m[0] == "x":
            _, i, sign = m
            xw = gens[i] if sign > 0 else inverse(gens[i])
            shift = inverse(xw)
            cpart = [(join(shift, c), j, e) for c, j, e in cpart]
            upart.append((i, sign))
        else:
            _, prefix, u, j, sign = m
            conj = join(prefix, inverse(u))
            cpart.append((conj, j, -sign))
    return WitnessedElement(target, tuple(upart), tuple(cpart))


def closure_witness_search(pres: Presentation, w: Word):
    """Task: witness that ``w`` lies in the normal closure of the relators."""
    return witness_search(pres, (), w)


def membership_witness_search(pres: Presentation, gens: Sequence[Word], w: Word):
    return witness_search(pres, (tuple(gens),), w)
