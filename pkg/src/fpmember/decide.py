"""Composed deciders: word problem, membership, double cosets, coset
intersections, finite-index membership, retract reductions and peripheral
intersections."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .abelian import integer_kernel, lattice_intersection, relation_matrix
from .certify import SubgroupEntry
from .cosets import coset_rep_of, intersect_with_finite_index, separating_quotient_task
from .enumeration import Budget, Exhausted, WitnessedElement, drive, witness_search
from .quotients import FiniteQuotient, double_coset_image_test, identity_perm, subgroup_image_test
from .races import double_coset_race, membership_race, word_race
from .words import (
    DecoratedPresentation,
    GeneratorMap,
    GeneratorSet,
    Presentation,
    Word,
    commutator,
    exponent_sums,
    inverse,
    join,
    power,
    substitute_words,
)


class Outcome(str, enum.Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    EXHAUSTED = "exhausted"


CLAIM_NOT_IDENTITY = "image_not_identity"
CLAIM_NOT_IN_SUBGROUP = "image_not_in_subgroup"
CLAIM_NOT_IN_DOUBLE_COSET = "image_not_in_double_coset"


@dataclass(frozen=True)
class MembershipWitness:
    """``element.word`` written as a product of ``generators`` and relator conjugates."""

    element: WitnessedElement
    generators: tuple = ()

    def check(self, pres: Presentation, word: Optional[Word] = None) -> bool:
        if word is not None and tuple(word) != self.element.word:
            return False
        return self.element.check(pres, self.generators)


@dataclass(frozen=True)
class QuotientCertificate:
    quotient: FiniteQuotient
    claim: str

    def check(self, pres: Presentation, z: Word, xs: Sequence[Word] = (), ys: Sequence[Word] = ()) -> bool:
        q = self.quotient
        if not q.source.structurally_equal(pres) or not q.kills_relators():
            return False
        if self.claim == CLAIM_NOT_IDENTITY:
            return q.image(z) != identity_perm(q.degree)
        if self.claim == CLAIM_NOT_IN_SUBGROUP:
            return not subgroup_image_test(q, xs, z)
        if self.claim == CLAIM_NOT_IN_DOUBLE_COSET:
            return not double_coset_image_test(q, xs, ys, z)
        return False


@dataclass(frozen=True)
class Decision:
    outcome: Outcome
    certificate: object = None
    steps_used: int = 0

    @property
    def decided(self) -> bool:
        return self.outcome is not Outcome.EXHAUSTED


def _exhausted(steps) -> Decision:
    return Decision(Outcome.EXHAUSTED, None, steps)


def decide_word(pres: Presentation, w: Word, budget: Budget) -> Decision:
    w = pres.check_word(w)
    if not w:
        return Decision(Outcome.TRIVIAL, MembershipWitness(WitnessedElement(())), 0)
    res, steps = drive(word_race(pres, w, budget.max_quotient_degree), budget)
    if isinstance(res, Exhausted):
        return _exhausted(steps)
    kind, data = res
    if kind == "trivial":
        return Decision(Outcome.TRIVIAL, MembershipWitness(data), steps)
    return Decision(Outcome.NONTRIVIAL, QuotientCertificate(data, CLAIM_NOT_IDENTITY), steps)


def decide_membership(pres: Presentation, gens: Sequence[Word], z: Word, budget: Budget) -> Decision:
    gens = tuple(pres.check_word(g) for g in gens)
    z = pres.check_word(z)
    res, steps = drive(membership_race(pres, gens, z, budget.max_quotient_degree), budget)
    if isinstance(res, Exhausted):
        return _exhausted(steps)
    kind, data = res
    if kind == "member":
        return Decision(Outcome.MEMBER, MembershipWitness(data, gens), steps)
    return Decision(Outcome.NON_MEMBER, QuotientCertificate(data, CLAIM_NOT_IN_SUBGROUP), steps)


def decide_double_coset(pres: Presentation, xs, ys, z: Word, budget: Budget) -> Decision:
    """Decide z in <X><Y>; witness letters index into X followed by Y."""
    xs = tuple(pres.check_word(g) for g in xs)
    ys = tuple(pres.check_word(g) for g in ys)
    z = pres.check_word(z)
    res, steps = drive(double_coset_race(pres, xs, ys, z, budget.max_quotient_degree), budget)
    if isinstance(res, Exhausted):
        return _exhausted(steps)
    kind, data = res
    if kind == "member":
        return Decision(Outcome.MEMBER, MembershipWitness(data, xs + ys), steps)
    return Decision(Outcome.NON_MEMBER, QuotientCertificate(data, CLAIM_NOT_IN_DOUBLE_COSET), steps)


# ---------------------------------------------------------------------------
# witness arithmetic


def _upart_word(gens, upart) -> Word:
    out: Word = ()
    for idx, sign in upart:
        g = gens[idx]
        out = join(out, g if sign > 0 else inverse(g))
    return out


def invert_witness(e: WitnessedElement, gens) -> WitnessedElement:
    """(U C)^-1 = U^-1 (U C^-1 U^-1)."""
    u = _upart_word(gens, e.subgroup_part)
    upart = tuple((i, -s) for i, s in reversed(e.subgroup_part))
    cpart = tuple((join(u, c), j, -s) for c, j, s in reversed(e.closure_part))
    return WitnessedElement(inverse(e.word), upart, cpart)


def multiply_witnesses(e1: WitnessedElement, e2: WitnessedElement, gens) -> WitnessedElement:
    """(U1 C1)(U2 C2) = U1 U2 (U2^-1 C1 U2) C2."""
    u2inv = inverse(_upart_word(gens, e2.subgroup_part))
    moved = tuple((join(u2inv, c), j, s) for c, j, s in e1.closure_part)
    return WitnessedElement(
        join(e1.word, e2.word),
        e1.subgroup_part + e2.subgroup_part,
        moved + e2.closure_part,
    )


def product_witness(factors, gens) -> WitnessedElement:
    """Witness for a product of (witness, sign) factors."""
    out = WitnessedElement(())
    for e, sign in factors:
        out = multiply_witnesses(out, e if sign > 0 else invert_witness(e, gens), gens)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetIntersection:
    """Result of a coset-intersection query a<X> ∩ <Y>.

    ``outcome`` is "witness", "empty" or "exhausted".  For a witness y,
    ``in_y`` writes y over Y and ``in_coset`` writes a^-1 y over X.
    """

    outcome: str
    element: Optional[Word] = None
    in_y: Optional[WitnessedElement] = None
    in_coset: Optional[WitnessedElement] = None
    certificate: Optional[QuotientCertificate] = None
    steps_used: int = 0

    def check(self, pres, xs, ys, a) -> bool:
        xs = [tuple(x) for x in xs]
        ys = [tuple(y) for y in ys]
        a = tuple(a)
        if self.outcome == "witness":
            return (
                self.in_y.word == self.element
                and self.in_y.check(pres, ys)
                and self.in_coset.word == join(inverse(a), self.element)
                and self.in_coset.check(pres, xs)
            )
        if self.outcome == "empty":
            # a<X> ∩ <Y> is empty iff a is outside <Y><X>
            return self.certificate.check(pres, a, ys, xs)
        return False


def coset_intersection_witness(pres: Presentation, xs, ys, a: Word, budget: Budget) -> CosetIntersection:
    xs = tuple(pres.check_word(g) for g in xs)
    ys = tuple(pres.check_word(g) for g in ys)
    a = pres.check_word(a)
    res, steps = drive(double_coset_race(pres, ys, xs, a, budget.max_quotient_degree), budget)
    if isinstance(res, Exhausted):
        return CosetIntersection("exhausted", steps_used=steps)
    kind, data = res
    if kind == "non_member":
        return CosetIntersection(
            "empty", certificate=QuotientCertificate(data, CLAIM_NOT_IN_DOUBLE_COSET), steps_used=steps
        )
    # a = U_Y U_X C with the Y letters first
    k = len(ys)
    uy = tuple(p for p in data.subgroup_part if p[0] < k)
    ux = tuple((i - k, s) for i, s in data.subgroup_part if i >= k)
    y = _upart_word(ys, uy)
    # a^-1 y = C^-1 U_X^-1 = U_X^-1 (U_X C^-1 U_X^-1)
    rest = WitnessedElement(join(inverse(_upart_word(ys, uy)), a), ux, data.closure_part)
    in_coset = invert_witness(rest, xs)
    return CosetIntersection(
        "witness",
        element=y,
        in_y=WitnessedElement(y, uy, ()),
        in_coset=in_coset,
        steps_used=steps,
    )


# ---------------------------------------------------------------------------


def decide_membership_finite_index(pres: Presentation, gens: Sequence[Word], z: Word, budget: Budget) -> Decision:
    """Find a quotient whose marked subgroup pulls back to <X>, then test z once.

    The Member certificate rewrites z over the Schreier generators and
    substitutes their witnesses; the NonMember certificate is the quotient
    itself, in which every generator fixes point 0 and z does not.
    """
    gens = tuple(pres.check_word(g) for g in gens)
    z = pres.check_word(z)
    cert, steps = drive(separating_quotient_task(pres, gens, budget.max_quotient_degree), budget)
    if isinstance(cert, Exhausted):
        return _exhausted(steps)
    t = cert.table
    word, end = _schreier_rewrite(cert, z)
    if end != 0:
        return Decision(Outcome.NON_MEMBER, QuotientCertificate(cert.quotient, CLAIM_NOT_IN_SUBGROUP), steps)
    factors = [(cert.schreier_witnesses[abs(x) - 1], 1 if x > 0 else -1) for x in word]
    elem = product_witness(factors, gens)
    return Decision(Outcome.MEMBER, MembershipWitness(elem, gens), steps)


def _schreier_rewrite(cert, z):
    from .cosets import reidemeister_schreier

    _, _, data = reidemeister_schreier(cert.table)
    return data.rewrite(cert.table, z)


@dataclass(frozen=True)
class RetractReduction:
    """Membership settled through a virtual retract.

    ``checks`` holds one entry per coset representative h of H ∩ pi0 in H:
    ``(h, z h^-1, in_pi0, decision in the target group or None)``.
    """

    subgroup: SubgroupEntry
    checks: tuple
    direct_witness: Optional[MembershipWitness] = None


def membership_via_retract(
    pres: Presentation,
    sub: SubgroupEntry,
    f: GeneratorMap,
    g: GeneratorMap,
    h_gens: Sequence[Word],
    z: Word,
    budget: Budget,
    oracle: Optional[Callable] = None,
) -> Decision:
    """Decide z in H = <h_gens> using pi0 (finite index) and f: pi0 -> Gamma.

    ``f`` must be injective (``g`` a left inverse is the caller's witness of
    that); ``oracle(gamma_pres, gens, word, budget)`` decides membership in
    the target group and defaults to :func:`decide_membership`.
    """
    oracle = oracle or decide_membership
    h_gens = [pres.check_word(h) for h in h_gens]
    z = pres.check_word(z)
    t = sub.table
    reps, h0 = intersect_with_finite_index(t, h_gens)
    # H is the disjoint union of right cosets H0 h, so z in H iff z h^-1 in H0
    h0_in_sub = [sub.schreier.rewrite(t, w)[0] for w in h0]
    h0_target = [f(w) for w in h0_in_sub]
    used = 0
    checks = []
    decided_member = False
    for h, _, _ in reps:
        w = join(z, inverse(h))
        rewritten, end = sub.schreier.rewrite(t, w)
        if end != 0:
            checks.append((h, w, False, None))
            continue
        remaining = Budget(max(budget.max_steps - used, 0), budget.max_quotient_degree)
        d = oracle(f.target, h0_target, f(rewritten), remaining)
        used += d.steps_used
        checks.append((h, w, True, d))
        if d.outcome is Outcome.EXHAUSTED:
            return _exhausted(used)
        if d.outcome is Outcome.MEMBER:
            decided_member = True
            break
    if not decided_member:
        return Decision(Outcome.NON_MEMBER, RetractReduction(sub, tuple(checks)), used)
    direct = None
    remaining = max(budget.max_steps - used, 0)
    res, steps = drive(witness_search(pres, (tuple(h_gens),), z), Budget(remaining))
    used += steps
    if not isinstance(res, Exhausted):
        direct = MembershipWitness(res, tuple(h_gens))
    return Decision(Outcome.MEMBER, RetractReduction(sub, tuple(checks), direct), used)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommutationResult:
    """``outcome`` is "commute", "not_commute" or "exhausted"."""

    outcome: str
    witnesses: tuple = ()  # ((i, j), WitnessedElement) for every pair when commuting
    certificate: Optional[tuple] = None  # ((i, j), QuotientCertificate) when not
    steps_used: int = 0


def commutation_task(pres, us, vs, max_degree):
    pairs = [(i, j) for i in range(len(us)) for j in range(len(vs))]
    tasks = {p: word_race(pres, commutator(us[p[0]], vs[p[1]]), max_degree) for p in pairs}
    done = {}
    while len(done) < len(pairs):
        for p in pairs:
            if p in done:
                continue
            try:
                next(tasks[p])
            except StopIteration as stop:
                res = stop.value
                if res is None:
                    return None
                if res[0] == "nontrivial":
                    for other, task in tasks.items():
                        if other not in done and other != p:
                            task.close()
                    return ("not_commute", p, res[1])
                done[p] = res[1]
                continue
            yield None
    return ("commute", tuple((p, done[p]) for p in pairs))


def commutation_test(pres: Presentation, us, vs, budget: Budget) -> CommutationResult:
    us = [pres.check_word(u) for u in us]
    vs = [pres.check_word(v) for v in vs]
    res, steps = drive(commutation_task(pres, us, vs, budget.max_quotient_degree), budget)
    if isinstance(res, Exhausted):
        return CommutationResult("exhausted", steps_used=steps)
    if res[0] == "commute":
        return CommutationResult("commute", res[1], None, steps)
    _, pair, q = res
    return CommutationResult("not_commute", (), (pair, QuotientCertificate(q, CLAIM_NOT_IDENTITY)), steps)


# ---------------------------------------------------------------------------


class CaseTag(str, enum.Enum):
    RETRACTION = "retraction"
    FIBER = "fiber"
    PRODUCT_CENTER = "product_center"


@dataclass(frozen=True)
class PeripheralCase:
    """Structural data for one peripheral intersection.

    ``retraction`` maps the generators of ``subgroup.presentation`` to ambient
    words; ``fiber`` gives p: pi0 -> Z on those generators; ``center`` lists
    ambient words generating the centre of pi0.
    """

    tag: CaseTag
    subgroup: SubgroupEntry
    retraction: Optional[tuple] = None
    fiber: Optional[tuple] = None
    center: tuple = ()
    assumptions: tuple = ()

    def check(self) -> bool:
        """Exact checks only: a fiber map must kill every relator of pi0."""
        pres = self.subgroup.presentation
        if self.tag is CaseTag.FIBER:
            if self.fiber is None or len(self.fiber) != pres.ngens:
                return False
            return all(
                sum(p * e for p, e in zip(self.fiber, exponent_sums(r, pres.ngens))) == 0 for r in pres.relators
            )
        return self.retraction is not None and len(self.retraction) == pres.ngens


def _word_from_coeffs(words, coeffs) -> Word:
    out: Word = ()
    for w, c in zip(words, coeffs):
        out = join(out, power(w, c))
    return out


def intersect_peripheral(
    dec: DecoratedPresentation, i: int, ys: Sequence[Word], case: PeripheralCase, budget: Budget
):
    """Generators of <edge subgroup i> ∩ <Y>, or :class:`Exhausted`.

    The case hypotheses (maximal abelian edge subgroup, abelian centralizers,
    commutative transitivity) are not checked; they ride along in
    ``case.assumptions``.
    """
    pres = dec.vertex
    sub = case.subgroup
    t = sub.table
    edge = [tuple(w) for w in dec.edge_subgroup(i).elements]
    _, p0 = intersect_with_finite_index(t, edge)
    p0_local = [sub.schreier.rewrite(t, w)[0] for w in p0]

    if case.tag is CaseTag.FIBER:
        values = [
            sum(p * e for p, e in zip(case.fiber, exponent_sums(w, sub.presentation.ngens))) for w in p0_local
        ]
        if not p0:
            return GeneratorSet(pres, ())
        kernel = integer_kernel([values], len(values))
        out = [_word_from_coeffs(p0, c) for c in kernel]
        return GeneratorSet(pres, tuple(w for w in out if w))

    r_p0 = [substitute_words(case.retraction, w) for w in p0_local]
    r_p0 = [w for w in r_p0 if w]
    result = commutation_test(pres, r_p0, p0, budget)
    if result.outcome == "exhausted":
        return Exhausted(result.steps_used, {"stage": "commutation"})
    if result.outcome == "commute":
        return GeneratorSet(pres, tuple(r_p0))
    if case.tag is CaseTag.RETRACTION:
        return GeneratorSet(pres, ())
    # product case: the intersection lies in the centre, read it off in H1(pi0)
    n = sub.presentation.ngens
    b1 = [exponent_sums(sub.schreier.rewrite(t, w)[0], n) for w in r_p0]
    b2 = [exponent_sums(sub.schreier.rewrite(t, w)[0], n) for w in case.center]
    rels = relation_matrix(sub.presentation)
    coeffs = lattice_intersection(b1, b2, rels)
    out = [_word_from_coeffs(r_p0, c) for c in coeffs]
    return GeneratorSet(pres, tuple(w for w in out if w))
