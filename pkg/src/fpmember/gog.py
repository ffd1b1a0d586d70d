"""Graphs of groups: free products, fundamental-group presentations,
subdecorations and the oracle bundle used for composed membership."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .syntax import ParseError, parse_presentation, parse_word
from .words import (
    DecoratedPresentation,
    GeneratorMap,
    Presentation,
    Word,
    free_reduce,
    inverse,
    join,
    letter,
)


def _fresh(name: str, used: set) -> str:
    if name not in used:
        return name
    base = re.match(r"[A-Za-z]", name).group(0)
    k = 1
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def _shift(w: Sequence[int], offset: int) -> Word:
    return tuple(x + offset if x > 0 else x - offset for x in w)


def free_product_maps(parts: Sequence[Presentation], name: Optional[str] = None):
    """Free product of ``parts`` and the inclusion of each part.

    A generator name already taken by an earlier part is replaced by the
    first unused name of the form letter + number.
    """
    if not parts:
        raise ValueError("free product needs at least one part")
    if len(parts) == 1:
        p = parts[0]
        return p, [GeneratorMap(p, p, tuple((letter(g),) for g in range(p.ngens)))]
    used: set = set()
    gens, rels, offsets = [], [], []
    for p in parts:
        offsets.append(len(gens))
        for g in p.generators:
            new = _fresh(g, used)
            used.add(new)
            gens.append(new)
    for p, off in zip(parts, offsets):
        rels.extend(_shift(r, off) for r in p.relators)
    name = name or "_".join(p.name or "G" for p in parts)
    result = Presentation(tuple(gens), tuple(rels), name)
    maps = [
        GeneratorMap(p, result, tuple((letter(off + g),) for g in range(p.ngens)))
        for p, off in zip(parts, offsets)
    ]
    return result, maps


def free_product(parts: Sequence[Presentation], name: Optional[str] = None) -> Presentation:
    return free_product_maps(parts, name)[0]


@dataclass(frozen=True)
class GogEdge:
    name: str
    source: str
    target: str
    group: Presentation
    source_map: GeneratorMap  # edge group -> source vertex group
    target_map: GeneratorMap  # edge group -> target vertex group


@dataclass(frozen=True)
class GraphOfGroups:
    """Vertex groups, edge groups with two maps each, and a spanning tree.

    Edge maps are taken to be injective; that is recorded in ``assumptions``
    and never checked.
    """

    vertices: tuple  # (name, Presentation)
    edges: tuple = ()  # GogEdge
    tree: Optional[frozenset] = None  # edge names; None means breadth-first
    assumptions: tuple = ("edge maps are injective",)

    def __post_init__(self):
        names = [v for v, _ in self.vertices]
        if len(set(names)) != len(names):
            raise ValueError("duplicate vertex name")
        if not names:
            raise ValueError("a graph of groups needs a vertex")
        groups = dict(self.vertices)
        enames = [e.name for e in self.edges]
        if len(set(enames)) != len(enames):
            raise ValueError("duplicate edge name")
        for e in self.edges:
            if e.source not in groups or e.target not in groups:
                raise ValueError(f"edge {e.name} has an unknown endpoint")
            if e.source_map.source != e.group or e.target_map.source != e.group:
                raise ValueError(f"edge {e.name}: maps must start at the edge group")
            if e.source_map.target != groups[e.source] or e.target_map.target != groups[e.target]:
                raise ValueError(f"edge {e.name}: maps must end at the endpoint groups")
        tree = self.spanning_tree()
        object.__setattr__(self, "tree", frozenset(tree))

    def vertex_group(self, name: str) -> Presentation:
        return dict(self.vertices)[name]

    def spanning_tree(self) -> list:
        names = [v for v, _ in self.vertices]
        adj = {v: [] for v in names}
        for e in self.edges:
            adj[e.source].append((e.name, e.target))
            adj[e.target].append((e.name, e.source))
        if self.tree is None:
            seen = {names[0]}
            chosen = []
            queue = deque([names[0]])
            while queue:
                v = queue.popleft()
                for ename, w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        chosen.append(ename)
                        queue.append(w)
            if len(seen) != len(names):
                raise ValueError("graph is disconnected")
            return chosen
        chosen = [e.name for e in self.edges if e.name in self.tree]
        if set(chosen) != set(self.tree):
            raise ValueError("tree names an unknown edge")
        # a spanning tree has |V| - 1 edges, no cycle and reaches every vertex
        parent = {v: v for v in names}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            if e.name in self.tree:
                a, b = find(e.source), find(e.target)
                if a == b:
                    raise ValueError("tree edges contain a cycle")
                parent[a] = b
        if len({find(v) for v in names}) != 1:
            raise ValueError("graph is disconnected or tree does not span")
        return chosen


def gog_presentation(g: GraphOfGroups, name: Optional[str] = None):
    """Presentation of the fundamental group and the map of each vertex group into it.

    Tree edges contribute i_e(h) t_e(h)^-1, other edges s i_e(h) s^-1 t_e(h)^-1
    with a fresh stable letter s.
    """
    parts = [p for _, p in g.vertices]
    base, maps = free_product_maps(parts)
    if len(parts) == 1:
        maps = [GeneratorMap(parts[0], base, tuple((letter(i),) for i in range(base.ngens)))]
    vmap = {v: m for (v, _), m in zip(g.vertices, maps)}
    gens = list(base.generators)
    used = set(gens)
    rels = list(base.relators)
    stable = {}
    for e in g.edges:
        if e.name not in g.tree:
            s = _fresh("t", used)
            used.add(s)
            gens.append(s)
            stable[e.name] = len(gens)
    for e in g.edges:
        im, tm = vmap[e.source], vmap[e.target]
        for h in range(e.group.ngens):
            i_h = im(e.source_map.images[h])
            t_h = tm(e.target_map.images[h])
            if e.name in g.tree:
                r = join(i_h, inverse(t_h))
            else:
                s = (stable[e.name],)
                r = join(join(join(s, i_h), inverse(s)), inverse(t_h))
            if r:
                rels.append(r)
    pres = Presentation(tuple(gens), tuple(rels), name or "pi1")
    vertex_maps = {v: GeneratorMap(m.source, pres, m.images) for v, m in vmap.items()}
    return pres, vertex_maps


def subdecoration(dec: DecoratedPresentation, subset) -> DecoratedPresentation:
    subset = set(subset)
    unknown = subset - set(dec.index_set)
    if unknown:
        raise ValueError(f"unknown edge index {sorted(map(str, unknown))}")
    return DecoratedPresentation(dec.vertex, tuple((k, v) for k, v in dec.edges if k in subset))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionBundle:
    """Wiring of the six oracles a composed membership argument consumes.

    ``slender_edges`` is an assumption flag supplied by the caller.
    """

    double_coset: Optional[Callable] = None
    vertex_membership: Optional[Callable] = None
    slender_edges: Optional[bool] = None
    edge_membership: Optional[Callable] = None
    intersection: Optional[Callable] = None
    enumerator: Optional[Callable] = None

    def complete(self) -> bool:
        return all(
            x is not None
            for x in (
                self.double_coset,
                self.vertex_membership,
                self.slender_edges,
                self.edge_membership,
                self.intersection,
                self.enumerator,
            )
        )

    def assumptions(self) -> tuple:
        return ("edge groups are slender",) if self.slender_edges else ()


def abelian_edge_membership(pres: Presentation, gens, z, budget=None):
    """Membership for free abelian edge groups via exponent-sum lattices."""
    from .abelian import NOT_MEMBER, lattice_membership
    from .words import exponent_sums

    basis = [exponent_sums(w, pres.ngens) for w in gens]
    return lattice_membership(basis, exponent_sums(z, pres.ngens)) is not NOT_MEMBER


def default_bundle() -> ConditionBundle:
    from .corpus import iter_corpus
    from .decide import decide_double_coset, decide_membership, intersect_peripheral

    return ConditionBundle(
        double_coset=decide_double_coset,
        vertex_membership=decide_membership,
        slender_edges=True,
        edge_membership=abelian_edge_membership,
        intersection=intersect_peripheral,
        enumerator=iter_corpus,
    )


# ---------------------------------------------------------------------------
# description files

_VERTEX_RE = re.compile(r"vertex\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(<.*>)\s*$")
_EDGE_RE = re.compile(
    r"(tree\s+)?edge\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*"
    r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(<[^>]*>)\s*(?:via\b(.*))?$"
)


def _split_top(text: str, sep: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_assignments(text: str, edge: Presentation, target: Presentation, line: str) -> GeneratorMap:
    images = {}
    for item in _split_top(text, ","):
        if not item.strip():
            continue
        if "->" not in item:
            raise ParseError(f"expected 'generator -> word' in {item.strip()!r}", line, 0)
        lhs, rhs = item.split("->", 1)
        lhs = lhs.strip()
        if lhs not in edge.generators:
            raise ParseError(f"unknown edge generator {lhs!r}", line, 0)
        if lhs in images:
            raise ParseError(f"edge generator {lhs!r} assigned twice", line, 0)
        images[lhs] = parse_word(rhs, target)
    missing = [g for g in edge.generators if g not in images]
    if missing:
        raise ParseError(f"no image for edge generator(s) {', '.join(missing)}", line, 0)
    return GeneratorMap(edge, target, tuple(images[g] for g in edge.generators))


def parse_gog(text: str) -> GraphOfGroups:
    """Parse a graph-of-groups description.

    One item per line; ``#`` starts a comment::

        vertex V = < a, b | [a,b] >
        tree edge e : V -> W = < h | > via h -> a ; h -> x
    """
    vertices = {}
    order = []
    edges = []
    tree = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _VERTEX_RE.match(line)
        if m:
            name = m.group(1)
            if name in vertices:
                raise ParseError(f"line {lineno}: duplicate vertex {name}", line, 0)
            vertices[name] = parse_presentation(m.group(2))
            vertices[name] = Presentation(vertices[name].generators, vertices[name].relators, name)
            order.append(name)
            continue
        m = _EDGE_RE.match(line)
        if m:
            is_tree, ename, src, tgt, body, via = m.groups()
            for v in (src, tgt):
                if v not in vertices:
                    raise ParseError(f"line {lineno}: unknown vertex {v}", line, 0)
            group = parse_presentation(body)
            group = Presentation(group.generators, group.relators, ename)
            via = via or ""
            sides = via.split(";")
            if len(sides) != 2:
                if group.ngens == 0 and not via.strip():
                    sides = ["", ""]
                else:
                    raise ParseError(f"line {lineno}: 'via' needs two maps separated by ';'", line, 0)
            smap = _parse_assignments(sides[0], group, vertices[src], line)
            tmap = _parse_assignments(sides[1], group, vertices[tgt], line)
            edges.append(GogEdge(ename, src, tgt, group, smap, tmap))
            if is_tree:
                tree.add(ename)
            continue
        raise ParseError(f"line {lineno}: expected 'vertex' or 'edge'", line, 0)
    return GraphOfGroups(
        tuple((v, vertices[v]) for v in order),
        tuple(edges),
        frozenset(tree) if tree else None,
    )
