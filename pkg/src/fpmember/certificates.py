"""Certificate documents: JSON encoding, an independent verifier and mutations.

The verifier only free-reduces words and multiplies permutations; it never
searches.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .syntax import ParseError, format_word, parse_presentation, parse_word
from .words import Presentation, Word, inverse, join

VERSION = f"fpmember {__version__}"


@dataclass(frozen=True)
class Accept:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Reject:
    reason: str

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# encoding


def _w(pres: Presentation, w) -> str:
    return format_word(w, pres.generators)


def encode_witness(pres: Presentation, element) -> dict:
    return {
        "subgroup_word": [[i, s] for i, s in element.subgroup_part],
        "closure_factors": [
            {"conjugator": _w(pres, c), "relator_index": j, "sign": s} for c, j, s in element.closure_part
        ],
    }


def _letters_word(gens, letters) -> Word:
    out: Word = ()
    for i, s in letters:
        out = join(out, gens[i] if s > 0 else inverse(gens[i]))
    return out


def encode_quotient(q, claim: str) -> dict:
    return {
        "degree": q.degree,
        "images": [[x + 1 for x in p] for p in q.images],
        "claim": claim,
    }


def _base(query: dict, outcome: str, steps: int, assumptions=()) -> dict:
    return {
        "query": query,
        "outcome": outcome,
        "witness": None,
        "quotient": None,
        "assumptions": list(assumptions),
        "steps_used": steps,
        "version": VERSION,
    }


def decision_certificate(kind: str, pres: Presentation, decision, assumptions=(), **args) -> dict:
    """Certificate for a word, member or dcoset query.

    ``args`` carries ``word`` and, as applicable, ``generators`` or ``left``
    and ``right`` (all as words over ``pres``).
    """
    query = {"kind": kind, "presentation": str(pres)}
    for key in ("generators", "left", "right"):
        if key in args:
            query[key] = [_w(pres, g) for g in args[key]]
    query["word"] = _w(pres, args["word"])
    doc = _base(query, decision.outcome.value, decision.steps_used, assumptions)
    cert = decision.certificate
    if cert is None:
        return doc
    if hasattr(cert, "quotient"):
        doc["quotient"] = encode_quotient(cert.quotient, cert.claim)
    else:
        doc["witness"] = encode_witness(pres, cert.element)
    return doc


def intersection_certificate(pres: Presentation, xs, ys, a, result, assumptions=()) -> dict:
    query = {
        "kind": "cwitness",
        "presentation": str(pres),
        "left": [_w(pres, x) for x in xs],
        "right": [_w(pres, y) for y in ys],
        "coset_rep": _w(pres, a),
    }
    doc = _base(query, result.outcome, result.steps_used, assumptions)
    if result.outcome == "witness":
        # a = y (y^-1 a): letters index Y followed by X
        from .decide import invert_witness, multiply_witnesses
        from .enumeration import WitnessedElement

        k = len(ys)
        back = invert_witness(result.in_coset, xs)  # y^-1 a over X
        back = WitnessedElement(back.word, tuple((i + k, s) for i, s in back.subgroup_part), back.closure_part)
        whole = multiply_witnesses(result.in_y, back, tuple(ys) + tuple(xs))
        doc["witness"] = encode_witness(pres, whole)
        # the <Y> letters of the witness spell an element of the intersection
        ypart = [p for p in whole.subgroup_part if p[0] < k]
        doc["element"] = _w(pres, _letters_word(ys, ypart))
    elif result.outcome == "empty":
        doc["quotient"] = encode_quotient(result.certificate.quotient, result.certificate.claim)
    return doc


def iso_certificate(p: Presentation, p2: Presentation, cert, steps: int, progress=None) -> dict:
    query = {"kind": "iso", "presentation": str(p), "target": str(p2)}
    if not cert:
        doc = _base(query, "exhausted", steps)
        if progress:
            doc["progress"] = dict(sorted(progress.items()))
        return doc
    doc = _base(query, "isomorphic", steps)
    doc["maps"] = {
        "forward": [_w(p2, w) for w in cert.forward.images],
        "backward": [_w(p, w) for w in cert.backward.images],
    }
    sides = (p, p2)
    doc["conditions"] = [
        {
            "label": label,
            "side": "source" if side == 0 else "target",
            "word": _w(sides[side], word),
            "witness": encode_witness(sides[side], wit),
        }
        for label, side, word, wit in cert.conditions
    ]
    return doc


def subgroups_certificate(pres: Presentation, entries, max_degree: int, steps: int = 0) -> dict:
    query = {"kind": "subgroups", "presentation": str(pres), "max_degree": max_degree}
    doc = _base(query, "listed", steps)
    doc["subgroups"] = [
        {
            "index": e.index,
            "quotient": {"degree": e.source_quotient.degree, "images": [[x + 1 for x in p] for p in e.source_quotient.images]},
            "generators": [_w(pres, w) for w in e.embedding.images],
            "presentation": str(e.presentation),
        }
        for e in entries
    ]
    return doc


def dumps(doc: dict) -> str:
    """Deterministic text for a certificate document."""
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# verification


class _Bad(Exception):
    pass


def _need(cond, reason):
    if not cond:
        raise _Bad(reason)


def _word(pres, text) -> Word:
    _need(isinstance(text, str), "word fields must be strings")
    try:
        return parse_word(text, pres)
    except (ParseError, ValueError) as exc:
        raise _Bad(f"unparsable word {text!r}: {exc}")


def _evaluate(pres: Presentation, gens, witness: dict) -> Word:
    _need(isinstance(witness, dict), "witness must be an object")
    out: Word = ()
    for item in witness.get("subgroup_word", []):
        _need(isinstance(item, list) and len(item) == 2, "subgroup letters are [index, sign] pairs")
        i, s = item
        _need(isinstance(i, int) and 0 <= i < len(gens), f"subgroup letter index {i} out of range")
        _need(s in (1, -1), "signs must be 1 or -1")
        g = gens[i]
        out = join(out, g if s == 1 else inverse(g))
    for f in witness.get("closure_factors", []):
        _need(isinstance(f, dict), "closure factors must be objects")
        c = _word(pres, f.get("conjugator"))
        j = f.get("relator_index")
        s = f.get("sign")
        _need(isinstance(j, int) and 0 <= j < len(pres.relators), f"relator index {j} out of range")
        _need(s in (1, -1), "signs must be 1 or -1")
        r = pres.relators[j]
        out = join(out, join(join(c, r if s == 1 else inverse(r)), inverse(c)))
    return out


def _perm_ops():
    def compose(p, q):
        return tuple(q[i] for i in p)

    def invert(p):
        out = [0] * len(p)
        for i, j in enumerate(p):
            out[j] = i
        return tuple(out)

    return compose, invert


def _read_quotient(pres, data) -> tuple:
    _need(isinstance(data, dict), "quotient must be an object")
    n = data.get("degree")
    _need(isinstance(n, int) and n >= 1, "degree must be a positive integer")
    images = data.get("images")
    _need(isinstance(images, list) and len(images) == pres.ngens, "one image per generator required")
    perms = []
    for img in images:
        _need(isinstance(img, list) and sorted(img) == list(range(1, n + 1)), "image is not a permutation of 1..degree")
        perms.append(tuple(x - 1 for x in img))
    return n, perms


def _image(perms, w, n):
    compose, invert = _perm_ops()
    cur = tuple(range(n))
    for x in w:
        p = perms[abs(x) - 1]
        cur = compose(cur, p if x > 0 else invert(p))
    return cur


def _closure(gens, n):
    compose, _ = _perm_ops()
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _check_quotient(pres, data, z, left=(), right=()):
    n, perms = _read_quotient(pres, data)
    e = tuple(range(n))
    for k, r in enumerate(pres.relators):
        _need(_image(perms, r, n) == e, f"relator {k} is not killed by the quotient")
    claim = data.get("claim")
    zi = _image(perms, z, n)
    compose, invert = _perm_ops()
    if claim == "image_not_identity":
        _need(zi != e, "image of the word is the identity")
    elif claim == "image_not_in_subgroup":
        imgs = [_image(perms, x, n) for x in left]
        # fast path: a point fixed by every generator image but moved by z
        if not any(all(g[p] == p for g in imgs) and zi[p] != p for p in range(n)):
            _need(zi not in _closure(imgs, n), "image of the word lies in the image subgroup")
    elif claim == "image_not_in_double_coset":
        a = _closure([_image(perms, x, n) for x in left], n)
        b = _closure([_image(perms, y, n) for y in right], n)
        _need(not any(compose(invert(g), zi) in b for g in a), "image of the word lies in the image double coset")
    else:
        raise _Bad(f"unknown claim {claim!r}")


def _check_order(witness, split):
    seen_right = False
    for i, _ in witness.get("subgroup_word", []):
        if i >= split:
            seen_right = True
        elif seen_right:
            raise _Bad("left-hand generators must all precede right-hand ones")


def _verify(doc: dict, pres: Optional[Presentation]):
    _need(isinstance(doc, dict), "certificate must be a JSON object")
    for key in ("query", "outcome", "witness", "quotient", "assumptions", "steps_used", "version"):
        _need(key in doc, f"missing field {key!r}")
    q = doc["query"]
    _need(isinstance(q, dict) and "kind" in q and "presentation" in q, "malformed query")
    try:
        embedded = parse_presentation(q["presentation"])
    except (ParseError, ValueError) as exc:
        raise _Bad(f"unparsable presentation: {exc}")
    if pres is not None:
        _need(pres.structurally_equal(embedded), "certificate is for a different presentation")
    pres = embedded
    kind, outcome = q["kind"], doc["outcome"]
    if kind == "iso":
        return _verify_iso(doc, pres)
    if kind == "subgroups":
        return _verify_subgroups(doc, pres)
    witness, quotient = doc["witness"], doc["quotient"]
    if kind == "word":
        z = _word(pres, q.get("word"))
        if outcome == "trivial":
            _need(witness is not None and not witness.get("subgroup_word"), "trivial needs a closure-only witness")
            _need(_evaluate(pres, [], witness) == z, "witness does not reduce to the word")
        elif outcome == "nontrivial":
            _need(quotient is not None and quotient.get("claim") == "image_not_identity", "wrong claim")
            _check_quotient(pres, quotient, z)
        else:
            raise _Bad(f"outcome {outcome!r} carries no checkable evidence")
        return
    if kind == "member":
        gens = [_word(pres, g) for g in q.get("generators", [])]
        z = _word(pres, q.get("word"))
        if outcome == "member":
            _need(witness is not None, "member needs a witness")
            _need(_evaluate(pres, gens, witness) == z, "witness does not reduce to the word")
        elif outcome == "non_member":
            _need(quotient is not None and quotient.get("claim") == "image_not_in_subgroup", "wrong claim")
            _check_quotient(pres, quotient, z, gens)
        else:
            raise _Bad(f"outcome {outcome!r} carries no checkable evidence")
        return
    if kind in ("dcoset", "cwitness"):
        left = [_word(pres, g) for g in q.get("left", [])]
        right = [_word(pres, g) for g in q.get("right", [])]
        if kind == "dcoset":
            z = _word(pres, q.get("word"))
            first, second, positive, negative = left, right, "member", "non_member"
        else:
            # a<X> ∩ <Y> nonempty  <=>  a in <Y><X>
            z = _word(pres, q.get("coset_rep"))
            first, second, positive, negative = right, left, "witness", "empty"
        if outcome == positive:
            _need(witness is not None, "positive outcome needs a witness")
            _check_order(witness, len(first))
            _need(_evaluate(pres, first + second, witness) == z, "witness does not reduce to the word")
            if kind == "cwitness":
                y = _evaluate(pres, first, {"subgroup_word": [p for p in witness["subgroup_word"] if p[0] < len(first)]})
                _need(_word(pres, doc.get("element", "")) == y, "element is not the <Y> part of the witness")
        elif outcome == negative:
            _need(quotient is not None and quotient.get("claim") == "image_not_in_double_coset", "wrong claim")
            _check_quotient(pres, quotient, z, first, second)
        else:
            raise _Bad(f"outcome {outcome!r} carries no checkable evidence")
        return
    raise _Bad(f"unknown query kind {kind!r}")


def _verify_iso(doc, p):
    _need(doc["outcome"] == "isomorphic", "only 'isomorphic' outcomes are checkable")
    try:
        p2 = parse_presentation(doc["query"]["target"])
    except (KeyError, ParseError, ValueError) as exc:
        raise _Bad(f"unparsable target presentation: {exc}")
    maps = doc.get("maps")
    _need(isinstance(maps, dict), "maps missing")
    fwd = [_word(p2, w) for w in maps.get("forward", [])]
    bwd = [_word(p, w) for w in maps.get("backward", [])]
    _need(len(fwd) == p.ngens and len(bwd) == p2.ngens, "one image per generator required")

    def sub(images, w):
        out = ()
        for x in w:
            img = images[abs(x) - 1]
            out = join(out, img if x > 0 else inverse(img))
        return out

    needed = []
    for k, r in enumerate(p.relators):
        needed.append((f"forward_relator_{k}", "target", sub(fwd, r)))
    for k, r in enumerate(p2.relators):
        needed.append((f"backward_relator_{k}", "source", sub(bwd, r)))
    for a in range(p.ngens):
        needed.append((f"round_trip_source_{a}", "source", join(sub(bwd, fwd[a]), (-(a + 1),))))
    for b in range(p2.ngens):
        needed.append((f"round_trip_target_{b}", "target", join(sub(fwd, bwd[b]), (-(b + 1),))))
    conds = doc.get("conditions")
    _need(isinstance(conds, list) and len(conds) == len(needed), "wrong number of conditions")
    for (label, side, word), c in zip(needed, conds):
        _need(c.get("label") == label and c.get("side") == side, f"condition {label} missing or out of order")
        pres = p if side == "source" else p2
        _need(_word(pres, c.get("word")) == word, f"condition {label} states the wrong word")
        w = c.get("witness")
        _need(isinstance(w, dict) and not w.get("subgroup_word"), f"condition {label} needs a closure-only witness")
        _need(_evaluate(pres, [], w) == word, f"witness for {label} does not reduce to its word")


def _verify_subgroups(doc, pres):
    from .cosets import coset_table, reidemeister_schreier
    from .quotients import FiniteQuotient

    entries = doc.get("subgroups")
    _need(isinstance(entries, list), "subgroups missing")
    for k, e in enumerate(entries):
        n, perms = _read_quotient(pres, e.get("quotient"))
        ident = tuple(range(n))
        for r in pres.relators:
            _need(_image(perms, r, n) == ident, f"entry {k}: relator not killed")
        orbit = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for p in perms:
                for y in (p[x], p.index(x)):
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
        _need(len(orbit) == n, f"entry {k}: action is not transitive")
        _need(e.get("index") == n, f"entry {k}: index differs from the number of cosets")
        t = coset_table(pres, FiniteQuotient(pres, n, perms), point=0)
        sub, emb, _ = reidemeister_schreier(t)
        _need([_word(pres, g) for g in e.get("generators", [])] == list(emb.images), f"entry {k}: generators differ")
        _need(e.get("presentation") == str(sub), f"entry {k}: presentation differs")


def verify_certificate(doc: dict, pres: Optional[Presentation] = None):
    """Accept or Reject(reason); ``pres`` if given must match the embedded presentation."""
    try:
        _verify(doc, pres)
    except _Bad as exc:
        return Reject(str(exc))
    except (TypeError, KeyError, AttributeError, ValueError) as exc:
        return Reject(f"malformed certificate: {exc}")
    return Accept()


# ---------------------------------------------------------------------------
# mutations


def witness_mutations(doc: dict) -> list:
    """Mutants that change a witness product; each must be rejected.

    Dropping a closure factor or flipping the sign of any factor always
    changes the product in a free group, since every factor is a nontrivial
    element and free groups have no torsion.
    """
    out = []
    sites = []
    if doc.get("witness"):
        sites.append(("witness",))
    for k, c in enumerate(doc.get("conditions", [])):
        if c.get("witness"):
            sites.append(("conditions", k, "witness"))
    for site in sites:
        w = _dig(doc, site)
        for j in range(len(w.get("closure_factors", []))):
            m = copy.deepcopy(doc)
            _dig(m, site)["closure_factors"].pop(j)
            out.append((f"drop closure factor {j} at {site}", m))
            m = copy.deepcopy(doc)
            f = _dig(m, site)["closure_factors"][j]
            f["sign"] = -f["sign"]
            out.append((f"flip closure sign {j} at {site}", m))
        for j in range(len(w.get("subgroup_word", []))):
            m = copy.deepcopy(doc)
            letter = _dig(m, site)["subgroup_word"][j]
            letter[1] = -letter[1]
            out.append((f"flip subgroup sign {j} at {site}", m))
    return out


def image_mutations(doc: dict) -> list:
    """Swap two entries in one permutation image.  The result may still be a
    valid certificate, so callers must judge each mutant independently."""
    q = doc.get("quotient")
    if not q:
        return []
    out = []
    for g, img in enumerate(q["images"]):
        for i in range(len(img)):
            for j in range(i + 1, len(img)):
                m = copy.deepcopy(doc)
                im = m["quotient"]["images"][g]
                im[i], im[j] = im[j], im[i]
                out.append((f"swap entries {i},{j} of image {g}", m))
    return out


def _dig(doc, path):
    cur = doc
    for p in path:
        cur = cur[p]
    return cur
