"""Built-in presentations, loaded from the ``.txt`` files in this package."""

from __future__ import annotations

from importlib import resources

from ..syntax import parse_presentation
from ..words import Presentation


def names() -> list:
    return sorted(
        p.name[:-4] for p in resources.files(__name__).iterdir() if p.name.endswith(".txt")
    )


def read_text(filename: str) -> str:
    return resources.files(__name__).joinpath(filename).read_text(encoding="ascii")


def load(name: str) -> Presentation:
    if name not in names():
        raise KeyError(f"no corpus presentation named {name!r}")
    return parse_presentation(_strip_comments(read_text(f"{name}.txt")))


def iter_corpus():
    for n in names():
        yield load(n)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())
