"""Text syntax for presentations and words.

    group Z2 = < a, b | [a,b] >
    group T  = < x, y | x^2 y^-3 >

Generator names are one ASCII letter optionally followed by digits, so
``ab`` is the word ``a b``.  ``[u,v]`` expands to ``u v u^-1 v^-1``,
``(w)^n`` raises a subword to a power and ``1`` is the empty word.
"""

from __future__ import annotations

import re
from typing import Optional, Sequence

from .words import Presentation, free_reduce, inverse, power, mul

_GEN_RE = re.compile(r"[A-Za-z][0-9]*$")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} (line {line}, column {col})")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>-?\d+)|(?P<gen>[A-Za-z][0-9]*)|(?P<sym>[<>|,\[\]()^=:;]|->))"
)


class _Lexer:
    def __init__(self, text: str, start: int = 0, end: Optional[int] = None):
        self.text = text
        self.end = len(text) if end is None else end
        self.tokens = []
        pos = start
        while True:
            while pos < self.end and self.text[pos].isspace():
                pos += 1
            if pos >= self.end:
                break
            m = _TOKEN_RE.match(text, pos, self.end)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            kind = m.lastgroup
            tok_start = m.start(kind)
            self.tokens.append((kind, m.group(kind), tok_start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, self.end)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", self.text, pos)
        return pos

    def at_end(self):
        return self.i >= len(self.tokens)


def _parse_word(lex: _Lexer, names: dict, stop=(",", "|", ">", None, ")", "]", ";")):
    letters: tuple = ()
    kind, val, pos = lex.peek()
    if kind == "int" and val == "1":
        lex.next()
        return ()
    while True:
        kind, val, pos = lex.peek()
        if val in stop or kind is None:
            return letters
        if kind == "gen":
            lex.next()
            if val not in names:
                raise ParseError(f"unknown generator {val!r}", lex.text, pos)
            atom = (names[val] + 1,)
        elif val == "(":
            lex.next()
            atom = _parse_word(lex, names)
            lex.expect(")")
        elif val == "[":
            lex.next()
            u = _parse_word(lex, names)
            lex.expect(",")
            v = _parse_word(lex, names)
            lex.expect("]")
            atom = mul(u, v, inverse(u), inverse(v))
        else:
            raise ParseError(f"unexpected token {val!r} in word", lex.text, pos)
        kind, val, pos = lex.peek()
        if val == "^":
            lex.next()
            kind, val, pos = lex.next()
            if kind != "int":
                raise ParseError("expected integer exponent", lex.text, pos)
            atom = power(atom, int(val))
        letters = mul(letters, atom)


def _parse_body(lex: _Lexer, name: Optional[str]) -> Presentation:
    lex.expect("<")
    gens = []
    kind, val, pos = lex.peek()
    if val != "|":
        while True:
            kind, val, pos = lex.next()
            if kind != "gen":
                raise ParseError(f"expected generator name, found {val!r}", lex.text, pos)
            if val in gens:
                raise ParseError(f"duplicate generator {val!r}", lex.text, pos)
            gens.append(val)
            kind, val, pos = lex.peek()
            if val == ",":
                lex.next()
                continue
            break
    lex.expect("|")
    names = {g: i for i, g in enumerate(gens)}
    rels = []
    kind, val, pos = lex.peek()
    if val != ">":
        while True:
            _, _, pos = lex.peek()
            w = _parse_word(lex, names)
            if not w:
                raise ParseError("relator is freely trivial", lex.text, pos)
            rels.append(w)
            kind, val, pos = lex.peek()
            if val == ",":
                lex.next()
                continue
            break
    lex.expect(">")
    return Presentation(tuple(gens), tuple(rels), name)


def parse_presentation(text: str) -> Presentation:
    """Parse ``group NAME = < gens | rels >`` (the ``group NAME =`` prefix is optional)."""
    name = None
    stripped = text.lstrip()
    offset = len(text) - len(stripped)
    start = offset
    # the keyword is matched by hand: the lexer would split it into letters
    if stripped.startswith("group"):
        m = re.match(r"group\s+([A-Za-z_][A-Za-z0-9_]*)\s*=", stripped)
        if not m:
            raise ParseError("expected 'group NAME ='", text, offset)
        name = m.group(1)
        start = offset + m.end()
    lex = _Lexer(text, start)
    pres = _parse_body(lex, name)
    if not lex.at_end():
        _, val, pos = lex.peek()
        raise ParseError(f"trailing input {val!r}", text, pos)
    return pres


def parse_presentation_at(text: str, start: int, end: int, name: Optional[str] = None) -> Presentation:
    lex = _Lexer(text, start, end)
    pres = _parse_body(lex, name)
    if not lex.at_end():
        _, val, pos = lex.peek()
        raise ParseError(f"trailing input {val!r}", text, pos)
    return pres


def parse_word(text: str, pres: Presentation) -> tuple:
    names = {g: i for i, g in enumerate(pres.generators)}
    lex = _Lexer(text)
    w = _parse_word(lex, names, stop=(None,))
    if not lex.at_end():
        _, val, pos = lex.peek()
        raise ParseError(f"trailing input {val!r}", text, pos)
    return free_reduce(w)


def parse_word_list(text: str, pres: Presentation) -> list:
    """Comma-separated words; brackets inside commutators are respected."""
    text = text.strip()
    if not text:
        return []
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [parse_word(p, pres) for p in parts]


def format_word(w: Sequence[int], generators: Sequence[str]) -> str:
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = generators[abs(w[i]) - 1]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        out.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(out)


def format_presentation(p: Presentation) -> str:
    gens = ", ".join(p.generators)
    rels = ", ".join(format_word(r, p.generators) for r in p.relators)
    body = f"< {gens} | {rels} >" if rels else f"< {gens} | >"
    return f"group {p.name or 'G'} = {body}"


def valid_generator_name(name: str) -> bool:
    return bool(_GEN_RE.match(name))
