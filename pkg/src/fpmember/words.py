"""Words in free groups, finite presentations and maps between them.

A word is a tuple of nonzero integers: generator ``g`` (0-based) is the
letter ``g + 1`` and its inverse is ``-(g + 1)``.  Words handed around by the
library are always freely reduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

Word = tuple


def letter(gen: int, sign: int = 1) -> int:
    return (gen + 1) if sign > 0 else -(gen + 1)


def gen_of(x: int) -> int:
    return abs(x) - 1


def letter_key(x: int) -> int:
    """Position of a letter in the fixed alphabet order a < a^-1 < b < b^-1 < ..."""
    return 2 * (abs(x) - 1) + (1 if x < 0 else 0)


def free_reduce(raw: Iterable[int], ngens: Optional[int] = None) -> Word:
    out: list = []
    for x in raw:
        if x == 0 or (ngens is not None and abs(x) > ngens):
            raise ValueError(f"invalid letter {x!r}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1)) and 0 not in w


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def join(u: Sequence[int], v: Sequence[int]) -> Word:
    """Product of two reduced words, cancelling only at the seam."""
    i, j = len(u), 0
    while i > 0 and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return tuple(u[:i]) + tuple(v[j:])


def mul(*words: Sequence[int]) -> Word:
    out: Word = ()
    for w in words:
        out = join(out, w)
    return out


def power(w: Sequence[int], n: int) -> Word:
    base = tuple(w) if n >= 0 else inverse(w)
    out: Word = ()
    for _ in range(abs(n)):
        out = join(out, base)
    return out


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    return mul(u, v, inverse(u), inverse(v))


def conjugate(c: Sequence[int], w: Sequence[int]) -> Word:
    """c w c^-1"""
    return mul(c, w, inverse(c))


def exponent_sums(w: Sequence[int], ngens: int) -> list:
    sums = [0] * ngens
    for x in w:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return sums


def shortlex_key(w: Sequence[int]):
    return (len(w), tuple(letter_key(x) for x in w))


def reduced_words(ngens: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly ``length`` letters, in shortlex order."""
    alphabet = sorted((s * (g + 1) for g in range(ngens) for s in (1, -1)), key=letter_key)

    def extend(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in alphabet:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def words_up_to(ngens: int, max_length: Optional[int] = None) -> Iterator[Word]:
    n = 0
    while max_length is None or n <= max_length:
        yield from reduced_words(ngens, n)
        if ngens == 0:
            return
        n += 1


@dataclass(frozen=True)
class Presentation:
    """A finite presentation <A | R>."""

    generators: tuple
    relators: tuple = ()
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be unique")
        n = len(self.generators)
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            if not is_reduced(r) or any(abs(x) > n for x in r):
                raise ValueError(f"relator {r!r} is not a reduced word over {n} generators")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def check_word(self, w: Sequence[int]) -> Word:
        w = tuple(w)
        if not is_reduced(w) or any(abs(x) > self.ngens for x in w):
            raise ValueError(f"word {w!r} is not a reduced word over {self.generators}")
        return w

    def structurally_equal(self, other: "Presentation") -> bool:
        return self.generators == other.generators and self.relators == other.relators

    def __str__(self):
        from .syntax import format_presentation

        return format_presentation(self)


@dataclass(frozen=True)
class GeneratorSet:
    base: Presentation
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.base.check_word(w) for w in self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def substitute_words(images: Sequence[Word], w: Sequence[int]) -> Word:
    out: Word = ()
    for x in w:
        img = images[abs(x) - 1]
        out = join(out, img if x > 0 else inverse(img))
    return out


@dataclass(frozen=True)
class GeneratorMap:
    """A map A -> F(A') given by one image word per source generator.

    ``verified`` is only set together with ``witnesses``: one closure witness
    per source relator showing its image is trivial in the target group.
    """

    source: Presentation
    target: Presentation
    images: tuple
    verified: bool = False
    witnesses: tuple = field(default=(), compare=False)

    def __post_init__(self):
        imgs = tuple(self.target.check_word(w) for w in self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.source.ngens:
            raise ValueError("one image per source generator required")
        if self.verified and len(self.witnesses) != len(self.source.relators):
            raise ValueError("a verified map needs one witness per source relator")

    def __call__(self, w: Sequence[int]) -> Word:
        return substitute(self, w)

    def compose(self, other: "GeneratorMap") -> "GeneratorMap":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise ValueError("maps are not composable")
        return GeneratorMap(self.source, other.target, tuple(other(w) for w in self.images))


def substitute(gmap: GeneratorMap, w: Sequence[int]) -> Word:
    w = tuple(w)
    if any(x == 0 or abs(x) > gmap.source.ngens for x in w):
        raise ValueError("word is not over the source alphabet")
    return substitute_words(gmap.images, w)


def identity_map(p: Presentation) -> GeneratorMap:
    return GeneratorMap(p, p, tuple((letter(g),) for g in range(p.ngens)))


@dataclass(frozen=True)
class DecoratedPresentation:
    """A vertex presentation with a finite family of edge subgroups.

    ``edges`` maps an index to ``(edge_presentation, inclusion)`` where the
    inclusion goes from the edge presentation into ``vertex``.
    """

    vertex: Presentation
    edges: tuple = ()

    def __post_init__(self):
        items = tuple(sorted(dict(self.edges).items(), key=lambda kv: str(kv[0])))
        for idx, (edge, inc) in items:
            if inc.source != edge or inc.target != self.vertex:
                raise ValueError(f"inclusion for edge {idx!r} has wrong source or target")
        object.__setattr__(self, "edges", items)

    @property
    def index_set(self) -> tuple:
        return tuple(k for k, _ in self.edges)

    def edge(self, i):
        for k, v in self.edges:
            if k == i:
                return v
        raise KeyError(i)

    def edge_subgroup(self, i) -> GeneratorSet:
        _, inc = self.edge(i)
        return GeneratorSet(self.vertex, inc.images)
