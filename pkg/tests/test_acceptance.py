"""Acceptance criteria, one test each.

Each test records a PASS/FAIL line; conftest prints them after the run.  The
file can also be run directly: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import json
import os
import random
import sys
import tempfile
import time

sys.path.insert(0, os.path.dirname(__file__))

from oracles import abelian_membership, exponent_vector, free_membership, random_reduced_word

from fpmember.abelian import NOT_MEMBER, abelianize, lattice_membership, smith_normal_form
from fpmember.certificates import (
    decision_certificate,
    dumps,
    image_mutations,
    iso_certificate,
    subgroups_certificate,
    verify_certificate,
    witness_mutations,
)
from fpmember.certify import certify_normal, certify_quotient_iso, enum_finite_index_subgroups, find_isomorphism
from fpmember.corpus import load, read_text
from fpmember.decide import Outcome, decide_membership
from fpmember.enumeration import Budget, Exhausted
from fpmember.gog import free_product, gog_presentation, parse_gog
from fpmember.quotients import FiniteQuotient, enum_sym_homs, subgroup_image_test
from fpmember.syntax import parse_presentation, parse_word

RESULTS: dict = {}

# lattices of index up to 11 occur below; a separating cyclic quotient needs that degree
ABELIAN_DEGREE = 16


def record(n: int, ok: bool, detail: str, seconds: float, limit=None):
    ok = ok and (limit is None or seconds <= limit)
    bound = f" / {limit:g}s" if limit is not None else ""
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}  [{seconds:.1f}s{bound}]"
    return ok


# ---------------------------------------------------------------------------
# instance generators (fixed seeds)


def free_instances():
    rng = random.Random(20240601)
    out = []
    for _ in range(200):
        gens = [random_reduced_word(rng, 2, rng.randint(1, 5)) for _ in range(rng.randint(1, 3))]
        out.append((gens, random_reduced_word(rng, 2, rng.randint(0, 6))))
    return out


def abelian_instances():
    rng = random.Random(20240602)
    groups = (load("Z2"), load("Z3"))
    out = []
    for i in range(200):
        p = groups[i % 2]
        gens = [random_reduced_word(rng, p.ngens, rng.randint(1, 5)) for _ in range(rng.randint(1, 3))]
        out.append((p, gens, random_reduced_word(rng, p.ngens, rng.randint(0, 6))))
    return out


# ---------------------------------------------------------------------------
# criterion runners; each returns (stats, certificate documents)


def run_free():
    f2 = load("F2")
    decided = agree = 0
    docs = []
    for gens, z in free_instances():
        d = decide_membership(f2, gens, z, Budget(10**6, 8))
        docs.append(decision_certificate("member", f2, d, word=z, generators=gens))
        if d.decided:
            decided += 1
            agree += (d.outcome is Outcome.MEMBER) == free_membership(gens, z)
    return (decided, agree), docs


def run_abelian():
    decided = agree = 0
    docs = []
    for p, gens, z in abelian_instances():
        basis = [exponent_vector(g, p.ngens) for g in gens]
        truth = lattice_membership(basis, exponent_vector(z, p.ngens)) is not NOT_MEMBER
        assert truth == abelian_membership(basis, exponent_vector(z, p.ngens))
        d = decide_membership(p, gens, z, Budget(10**6, ABELIAN_DEGREE))
        docs.append(decision_certificate("member", p, d, word=z, generators=gens))
        if d.decided:
            decided += 1
            agree += (d.outcome is Outcome.MEMBER) == truth
    return (decided, agree), docs


def run_homs():
    cases = [(load("Z2"), 3), (parse_presentation("< a | a^2 >"), 2)]
    docs = []
    counts = []
    for p, n in cases:
        homs = enum_sym_homs(p, n)
        counts.append(len(homs))
        docs.append(
            {
                "query": {"kind": "homs", "presentation": str(p), "degree": n},
                "homs": [[[x + 1 for x in img] for img in q.images] for q in homs],
            }
        )
    return tuple(counts), docs


def run_rank_law():
    f2 = load("F2")
    entries = list(enum_finite_index_subgroups(f2, 6))
    bad = [e for e in entries if e.presentation.ngens != 1 + e.index or e.presentation.relators]
    return (len(entries), len(bad)), [subgroups_certificate(f2, entries, 6)]


def _smith_ok(m, snf):
    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]

    def det(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** j * a[0][j] * det([r[:j] + r[j + 1 :] for r in a[1:]]) for j in range(len(a)))

    u, d, v = ([list(r) for r in x] for x in (snf.U, snf.D, snf.V))
    if mul(mul(u, m), v) != d or abs(det(u)) != 1 or abs(det(v)) != 1:
        return False
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    off = any(d[i][j] for i in range(len(d)) for j in range(len(d[0])) if i != j)
    chain = all((diag[i + 1] % diag[i] == 0) if diag[i] else diag[i + 1] == 0 for i in range(len(diag) - 1))
    return not off and chain and all(x >= 0 for x in diag)


def run_smith():
    rng = random.Random(20240605)
    spot = smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    tref = abelianize(load("Trefoil"))
    spot = spot and tref.matrix == ((2, -3),) and tref.smith.diagonal == (1,) and tref.invariant_factors == (0,)
    good = 0
    for _ in range(500):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-10, 10) for _ in range(c)] for _ in range(r)]
        good += _smith_ok(m, smith_normal_form(m))
    return (spot, good), []


@functools.lru_cache(maxsize=None)
def timed(name):
    runner = {"free": run_free, "abelian": run_abelian, "homs": run_homs, "rank": run_rank_law, "smith": run_smith}[name]
    t = time.perf_counter()
    stats, docs = runner()
    return stats, docs, time.perf_counter() - t


# ---------------------------------------------------------------------------


def test_criterion_01_free_group_oracle():
    (decided, agree), _, secs = timed("free")
    ok = decided >= 180 and agree == decided
    assert record(1, ok, f"{decided}/200 decided, {agree}/{decided} agree with folding", secs, 300)


def test_criterion_02_abelian_oracle():
    (decided, agree), _, secs = timed("abelian")
    ok = decided == 200 and agree == 200
    assert record(2, ok, f"{decided}/200 decided, {agree}/200 agree with lattice", secs, 60)


def test_criterion_03_hom_counts():
    counts, _, secs = timed("homs")
    assert record(3, counts == (18, 2), f"hom counts {counts}, expected (18, 2)", secs, 1)


def test_criterion_04_rank_law():
    (n, bad), _, secs = timed("rank")
    assert record(4, n > 0 and bad == 0, f"{n} subgroups of index <= 6, {bad} violate 1 + k generators", secs, 60)


def test_criterion_05_smith():
    (spot, good), _, secs = timed("smith")
    assert record(5, spot and good == 500, f"spot checks {'ok' if spot else 'wrong'}, {good}/500 random exact", secs, 30)


def _judge_image_mutant(doc) -> bool:
    """Validity of a quotient certificate via the library's permutation code."""
    pres = parse_presentation(doc["query"]["presentation"])
    qd, qry = doc["quotient"], doc["query"]
    try:
        q = FiniteQuotient(pres, qd["degree"], [[x - 1 for x in img] for img in qd["images"]])
    except ValueError:
        return False
    if not q.kills_relators():
        return False
    z = parse_word(qry["word"], pres)
    if qd["claim"] == "image_not_identity":
        return q.image(z) != tuple(range(q.degree))
    gens = [parse_word(g, pres) for g in qry["generators"]]
    return not subgroup_image_test(q, gens, z)


def test_criterion_06_round_trip_and_mutations():
    t = time.perf_counter()
    docs = [d for name in ("free", "abelian", "rank") for d in timed(name)[1]]
    emitted = [d for d in docs if d["outcome"] != "exhausted"]
    accepted = sum(1 for d in emitted if verify_certificate(json.loads(dumps(d))))
    mutants = []
    for d in emitted:
        mutants += [m for _, m in witness_mutations(d)]
        # swapped images can stay valid; keep only those the oracle rejects
        mutants += [m for _, m in image_mutations(d) if not _judge_image_mutant(m)]
    rejected = sum(1 for m in mutants if not verify_certificate(m))
    ok = accepted == len(emitted) and len(mutants) >= 50 and rejected == len(mutants)
    detail = f"{accepted}/{len(emitted)} accepted, {rejected}/{len(mutants)} mutants rejected"
    assert record(6, ok, detail, time.perf_counter() - t, 60)


def _write_all(directory):
    paths = []
    for name in ("free", "abelian", "homs"):
        _, docs = {"free": run_free, "abelian": run_abelian, "homs": run_homs}[name]()
        for k, doc in enumerate(docs):
            path = os.path.join(directory, f"{name}_{k:03d}.json")
            with open(path, "w", encoding="ascii") as fh:
                fh.write(dumps(doc))
            paths.append(path)
    return paths


def test_criterion_07_determinism():
    t = time.perf_counter()
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        pa, pb = _write_all(a), _write_all(b)
        same = [open(x, "rb").read() == open(y, "rb").read() for x, y in zip(pa, pb)]
    # the first run through the cached runners must match too
    cached = [dumps(d) for name in ("free", "abelian", "homs") for d in timed(name)[1]]
    with tempfile.TemporaryDirectory() as c:
        fresh = [open(p, encoding="ascii").read() for p in _write_all(c)]
    ok = len(pa) == len(pb) and all(same) and cached == fresh
    assert record(7, ok, f"{sum(same)}/{len(same)} files byte-identical across reruns", time.perf_counter() - t)


def test_criterion_08_graph_of_groups():
    t = time.perf_counter()
    torus, _ = gog_presentation(parse_gog(read_text("mapping_torus.gog")))
    factors = abelianize(torus).invariant_factors
    modular = free_product([parse_presentation("< x | x^2 >"), parse_presentation("< y | y^3 >")])
    xy, z = [parse_word("x y", modular)], parse_word("x y x", modular)
    d = decide_membership(modular, xy, z, Budget(10**6, 6))
    doc = decision_certificate("member", modular, d, word=z, generators=xy)
    ok = factors == (0, 0) and d.outcome is Outcome.NON_MEMBER and d.certificate.check(modular, z, xy)
    ok = ok and bool(verify_certificate(doc))
    detail = f"torus factors {factors}; x y x in <x y>: {d.outcome.value}"
    if d.outcome is Outcome.NON_MEMBER:
        detail += f" (degree {d.certificate.quotient.degree})"
    assert record(8, ok, detail, time.perf_counter() - t, 120)


def test_criterion_09_certification_searches():
    t = time.perf_counter()
    src, tgt = parse_presentation("< a | a^6 >"), parse_presentation("< x, y | x^2, y^3, [x,y] >")
    iso = find_isomorphism(src, tgt, Budget(10**6, 6))
    t_iso = time.perf_counter() - t
    iso_ok = not isinstance(iso, Exhausted) and iso.check() and bool(verify_certificate(iso_certificate(src, tgt, iso, 0)))
    t = time.perf_counter()
    f2, zq = load("F2"), parse_presentation("< x | >")
    qiso = certify_quotient_iso(f2, [(2,)], zq, Budget(10**6, 6))
    t_q = time.perf_counter() - t
    q_ok = not isinstance(qiso, Exhausted) and qiso.check(f2, [(2,)], zq)
    q_ok = q_ok and bool(verify_certificate(iso_certificate(qiso.augmented, zq, qiso.iso, 0)))
    ok = iso_ok and q_ok and t_iso <= 60 and t_q <= 60
    detail = f"Z/6 iso {'certified' if iso_ok else 'missing'} in {t_iso:.1f}s, F2/<<b>> = Z {'certified' if q_ok else 'missing'} in {t_q:.1f}s"
    assert record(9, ok, detail, max(t_iso, t_q), 60)


def test_criterion_10_exhaustion_honesty():
    t = time.perf_counter()
    f2 = load("F2")
    z = parse_word("b a b^-1", f2)
    d = decide_membership(f2, [(1,)], z, Budget(10**6, 3))
    mem_ok = (
        d.outcome is Outcome.NON_MEMBER
        and d.certificate.quotient.degree <= 3
        and d.certificate.check(f2, z, [(1,)])
        and not free_membership([(1,)], z)
    )
    budgets = (0, 1, 100, 10_000, 50_000)
    normal = [certify_normal(f2, [(1,)], Budget(b)) for b in budgets]
    norm_ok = all(isinstance(r, Exhausted) for r in normal)
    detail = f"membership {d.outcome.value}; certify_normal exhausted at budgets {budgets}: {norm_ok}"
    assert record(10, mem_ok and norm_ok, detail, time.perf_counter() - t, 120)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    for n in sorted(RESULTS):
        print(RESULTS[n])
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
