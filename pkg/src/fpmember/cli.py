"""Command-line driver.

Exit status: 0 when the query was decided (or a certificate verified), 2 when
the budget ran out, 1 on any error or rejected certificate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import corpus
from .certificates import (
    decision_certificate,
    dumps,
    intersection_certificate,
    iso_certificate,
    subgroups_certificate,
    verify_certificate,
    VERSION,
)
from .certify import enum_finite_index_subgroups, map_pair_search
from .decide import coset_intersection_witness, decide_double_coset, decide_membership, decide_word
from .enumeration import Budget, Exhausted, drive
from .gog import gog_presentation, parse_gog
from .syntax import ParseError, format_word, parse_presentation, parse_word, parse_word_list
from .words import Presentation

EXIT_DECIDED, EXIT_ERROR, EXIT_EXHAUSTED = 0, 1, 2
DEFAULT_BUDGET = 1_000_000
DEFAULT_DEGREE = 6

UNDECIDED = {"exhausted"}


@dataclass
class QueryRecord:
    """One query: the presentation, what to decide and the search limits."""

    kind: str
    presentation: Presentation
    words: dict = field(default_factory=dict)  # argument name -> word or list of words
    budget: int = DEFAULT_BUDGET
    max_degree: int = DEFAULT_DEGREE
    target: Presentation = None


def load_presentation(ref: str) -> Presentation:
    """A file path, a corpus name or inline presentation text."""
    if os.path.isfile(ref):
        with open(ref, encoding="ascii") as fh:
            text = "\n".join(line.split("#", 1)[0] for line in fh.read().splitlines())
        return parse_presentation(text)
    if ref in corpus.names():
        return corpus.load(ref)
    return parse_presentation(ref)


def run_query(q: QueryRecord) -> dict:
    """Certificate document for ``q``; ``outcome`` is "exhausted" when undecided."""
    pres = q.presentation
    budget = Budget(q.budget, q.max_degree)
    w = q.words
    if q.kind == "iso":
        progress = {}
        res, steps = _search(map_pair_search(pres, q.target, "iso", q.max_degree, progress), q.budget)
        return iso_certificate(pres, q.target, None if isinstance(res, Exhausted) else res, steps, progress)
    if q.kind == "subgroups":
        entries = list(enum_finite_index_subgroups(pres, q.max_degree))
        return subgroups_certificate(pres, entries, q.max_degree, steps=len(entries))
    if q.kind == "cwitness":
        res = coset_intersection_witness(pres, w["left"], w["right"], w["coset_rep"], budget)
        return intersection_certificate(pres, w["left"], w["right"], w["coset_rep"], res)
    if q.kind == "word":
        d = decide_word(pres, w["word"], budget) if q.budget else _nothing()
        return decision_certificate("word", pres, d, word=w["word"])
    if q.kind == "member":
        d = decide_membership(pres, w["generators"], w["word"], budget) if q.budget else _nothing()
        return decision_certificate("member", pres, d, word=w["word"], generators=w["generators"])
    if q.kind == "dcoset":
        d = decide_double_coset(pres, w["left"], w["right"], w["word"], budget) if q.budget else _nothing()
        return decision_certificate("dcoset", pres, d, word=w["word"], left=w["left"], right=w["right"])
    raise ValueError(f"unknown query kind {q.kind!r}")


def _nothing():
    from .decide import Decision, Outcome

    return Decision(Outcome.EXHAUSTED, None, 0)


def _search(task, max_steps):
    if max_steps == 0:
        task.close()
        return Exhausted(0), 0
    return drive(task, Budget(max_steps))


def exit_code(doc: dict) -> int:
    return EXIT_EXHAUSTED if doc["outcome"] in UNDECIDED else EXIT_DECIDED


# ---------------------------------------------------------------------------
# text rendering


def render_text(doc: dict) -> str:
    q = doc["query"]
    lines = [f"query: {q['kind']} over {q['presentation']}", f"outcome: {doc['outcome']}"]
    if doc.get("witness"):
        wit = doc["witness"]
        lines.append(
            f"witness: {len(wit['subgroup_word'])} subgroup letter(s), "
            f"{len(wit['closure_factors'])} relator conjugate(s)"
        )
    if doc.get("element"):
        lines.append(f"element: {doc['element']}")
    if doc.get("quotient"):
        qt = doc["quotient"]
        imgs = "  ".join(" ".join(map(str, img)) for img in qt["images"])
        lines.append(f"quotient: degree {qt['degree']}, images [{imgs}], claim {qt['claim']}")
    if doc.get("maps"):
        lines.append("forward: " + ", ".join(doc["maps"]["forward"]))
        lines.append("backward: " + ", ".join(doc["maps"]["backward"]))
    for s in doc.get("subgroups", []):
        lines.append(f"index {s['index']}: {s['presentation']}  generated by {', '.join(s['generators'])}")
    if doc.get("assumptions"):
        lines.append("assumptions: " + "; ".join(doc["assumptions"]))
    lines.append(f"steps: {doc['steps_used']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="logical step budget")
    p.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE, help="largest quotient degree searched")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--certificate", metavar="PATH", help="also write the JSON certificate here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpmember", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("word", help="is WORD trivial?")
    p.add_argument("presentation")
    p.add_argument("word")
    _add_common(p)

    p = sub.add_parser("member", help="is WORD in the subgroup generated by GENERATORS?")
    p.add_argument("presentation")
    p.add_argument("generators", help="comma-separated words")
    p.add_argument("word")
    _add_common(p)

    p = sub.add_parser("dcoset", help="is WORD in <LEFT><RIGHT>?")
    p.add_argument("presentation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("word")
    _add_common(p)

    p = sub.add_parser("cwitness", help="an element of REP<LEFT> meeting <RIGHT>, or proof there is none")
    p.add_argument("presentation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("coset_rep")
    _add_common(p)

    p = sub.add_parser("iso", help="search for an isomorphism between two presentations")
    p.add_argument("presentation")
    p.add_argument("target")
    _add_common(p)

    p = sub.add_parser("subgroups", help="list finite-index subgroups up to --max-degree")
    p.add_argument("presentation")
    _add_common(p)

    p = sub.add_parser("gog-build", help="presentation of a graph of groups")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--name", default=None)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("file")
    p.add_argument("--presentation", default=None, help="require the certificate to be for this presentation")
    return ap


def _query_from_args(args) -> QueryRecord:
    if args.budget < 0 or args.max_degree < 1:
        raise ValueError("--budget must be >= 0 and --max-degree >= 1")
    pres = load_presentation(args.presentation)
    q = QueryRecord(args.command, pres, budget=args.budget, max_degree=args.max_degree)
    for name in ("word", "coset_rep"):
        if hasattr(args, name):
            q.words[name] = parse_word(getattr(args, name), pres)
    for name in ("generators", "left", "right"):
        if hasattr(args, name):
            q.words[name] = parse_word_list(getattr(args, name), pres)
    if args.command == "iso":
        q.target = load_presentation(args.target)
    return q


def _emit(text: str, out):
    out.write(text)
    out.flush()


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args, out)
        if args.command == "gog-build":
            return _gog_build(args, out)
        doc = run_query(_query_from_args(args))
    except (ParseError, ValueError, KeyError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    text = dumps(doc)
    if args.certificate:
        with open(args.certificate, "w", encoding="ascii") as fh:
            fh.write(text)
    _emit(text if args.format == "json" else render_text(doc), out)
    return exit_code(doc)


def _verify(args, out) -> int:
    with open(args.file, encoding="ascii") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            _emit(f"reject: not JSON ({exc})\n", out)
            return EXIT_ERROR
    pres = load_presentation(args.presentation) if args.presentation else None
    verdict = verify_certificate(doc, pres)
    if verdict:
        _emit("accept\n", out)
        return EXIT_DECIDED
    _emit(f"reject: {verdict.reason}\n", out)
    return EXIT_ERROR


def _gog_build(args, out) -> int:
    with open(args.file, encoding="ascii") as fh:
        graph = parse_gog(fh.read())
    pres, vmaps = gog_presentation(graph, args.name)
    if args.format == "text":
        _emit(str(pres) + "\n", out)
        return EXIT_DECIDED
    doc = {
        "presentation": str(pres),
        "vertex_maps": {
            v: [format_word(w, pres.generators) for w in m.images] for v, m in sorted(vmaps.items())
        },
        "tree": sorted(graph.tree),
        "assumptions": list(graph.assumptions),
        "version": VERSION,
    }
    _emit(dumps(doc), out)
    return EXIT_DECIDED


if __name__ == "__main__":
    sys.exit(main())
