"""Reader for the line-oriented space description format.

::

    # comment
    vertex a
    simplex a b c
    subcomplex top {
        all-containing a
        simplex b c
    }
    subcomplex pt { simplex b }
    cover space = top, pt

``simplex`` lines outside a block define the complex; missing faces are
added with a :class:`ClosureWarning`.  Inside a block, ``simplex`` adds the
closure of one existing simplex and ``all-containing v`` adds the closed
star of ``v``; several items may share a line when separated by ``;``.
``cover X = A, B`` gives the explicit cover of the set of subcomplex ``X``
(``space`` names the whole complex) as the ordered parts ``A, B``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .admissible import CoverOracle, ExplicitCoverOracle
from .exceptions import ParseError
from .simplicial import SimplicialComplex, SubcomplexRef

__all__ = [
    "ClosureWarning",
    "SpaceFile",
    "parse_space",
    "read_space",
    "bundled_examples",
    "load_example",
]

SPACE = "space"


class ClosureWarning(UserWarning):
    """Input simplices were not closed under taking faces."""


@dataclass
class SpaceFile:
    complex: SimplicialComplex
    subcomplexes: dict[str, SubcomplexRef] = field(default_factory=dict)
    covers: dict[str, list[str]] = field(default_factory=dict)

    @property
    def space(self) -> SubcomplexRef:
        return self.complex.full

    def lookup(self, name: str) -> SubcomplexRef:
        if name == SPACE:
            return self.space
        return self.subcomplexes[name]

    def root_cover(self) -> list[tuple[str, SubcomplexRef]]:
        if SPACE not in self.covers:
            raise KeyError("the file gives no cover of the whole space")
        return [(n, self.lookup(n)) for n in self.covers[SPACE]]

    def cover_oracle(self, fallback: CoverOracle | None = None) -> ExplicitCoverOracle:
        table = {self.lookup(k): [(n, self.lookup(n)) for n in v] for k, v in self.covers.items()}
        return ExplicitCoverOracle(table, fallback)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_space(text: str) -> SpaceFile:
    """Parse a space description; errors carry the offending line number."""
    vertices: list[str] = []
    seen_vertices: set[str] = set()
    simplices: list[tuple[tuple[str, ...], int]] = []
    blocks: dict[str, list[tuple[str, list[str], int]]] = {}
    block_lines: dict[str, int] = {}
    covers: dict[str, tuple[list[str], int]] = {}
    open_block: str | None = None

    def block_item(item: str, lineno: int) -> None:
        words = item.split()
        if not words:
            return
        if words[0] == "simplex" and len(words) > 1:
            blocks[open_block].append(("simplex", words[1:], lineno))
        elif words[0] == "all-containing" and len(words) == 2:
            blocks[open_block].append(("star", words[1:], lineno))
        else:
            raise ParseError(f"unexpected {item!r} inside subcomplex {open_block!r}", lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if open_block is not None:
            body, closes = line, False
            if "}" in line:
                body, rest = line.split("}", 1)
                if rest.strip():
                    raise ParseError("text after '}'", lineno)
                closes = True
            for item in body.split(";"):
                block_item(item, lineno)
            if closes:
                open_block = None
            continue
        words = line.split()
        head = words[0]
        if head == "vertex":
            if len(words) != 2:
                raise ParseError("expected 'vertex <label>'", lineno)
            if words[1] in seen_vertices:
                raise ParseError(f"duplicate vertex {words[1]!r}", lineno)
            seen_vertices.add(words[1])
            vertices.append(words[1])
        elif head == "simplex":
            if len(words) < 2:
                raise ParseError("expected 'simplex <label> ...'", lineno)
            if len(set(words[1:])) != len(words) - 1:
                raise ParseError("repeated vertex in simplex", lineno)
            simplices.append((tuple(words[1:]), lineno))
        elif head == "subcomplex":
            if len(words) < 3 or words[2] != "{" and not words[2].startswith("{"):
                raise ParseError("expected 'subcomplex <name> {'", lineno)
            name = words[1]
            if name == SPACE:
                raise ParseError(f"{SPACE!r} is reserved for the whole complex", lineno)
            if name in blocks:
                raise ParseError(f"duplicate subcomplex {name!r}", lineno)
            blocks[name] = []
            block_lines[name] = lineno
            open_block = name
            rest = line.split("{", 1)[1]
            if "}" in rest:
                body, tail = rest.split("}", 1)
                if tail.strip():
                    raise ParseError("text after '}'", lineno)
                for item in body.split(";"):
                    block_item(item, lineno)
                open_block = None
            else:
                for item in rest.split(";"):
                    block_item(item, lineno)
        elif head == "cover":
            if "=" not in line:
                raise ParseError("expected 'cover <name> = <part>, ...'", lineno)
            left, right = line[len("cover"):].split("=", 1)
            key = left.strip()
            parts = [p.strip() for p in right.split(",")]
            if not key or len(key.split()) != 1 or not all(parts) or any(len(p.split()) != 1 for p in parts):
                raise ParseError("malformed cover line", lineno)
            if key in covers:
                raise ParseError(f"duplicate cover for {key!r}", lineno)
            covers[key] = (parts, lineno)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if open_block is not None:
        raise ParseError(f"subcomplex {open_block!r} is never closed", block_lines[open_block])

    for simplex, lineno in simplices:
        for v in simplex:
            if v not in seen_vertices:
                raise ParseError(f"unknown vertex {v!r}", lineno)
    if not vertices:
        raise ParseError("no vertices declared", 0)

    given = {frozenset(s) for s, _ in simplices} | {frozenset([v]) for v in vertices}
    k = SimplicialComplex(vertices, [s for s, _ in simplices])
    if len(k) != len(given):
        warnings.warn(
            f"added {len(k) - len(given)} missing faces to close the complex",
            ClosureWarning,
            stacklevel=2,
        )

    subs: dict[str, SubcomplexRef] = {}
    for name, items in blocks.items():
        ids: set[int] = set()
        for kind, args, lineno in items:
            for v in args:
                if v not in seen_vertices:
                    raise ParseError(f"unknown vertex {v!r}", lineno)
            if kind == "star":
                ids |= k.star(args[0]).member
            else:
                key = tuple(sorted(k.vertex_index[v] for v in args))
                if key not in k.simplex_id:
                    raise ParseError(f"{' '.join(args)} is not a simplex of the complex", lineno)
                ids.add(k.simplex_id[key])
        subs[name] = k.closure(ids)

    out = SpaceFile(k, subs)
    seen_sets: dict[frozenset[int], str] = {}
    for key, (parts, lineno) in covers.items():
        for n in [key, *parts]:
            if n != SPACE and n not in subs:
                raise ParseError(f"unknown subcomplex {n!r}", lineno)
        member = out.lookup(key).member
        if member in seen_sets:
            raise ParseError(f"{key!r} has the same set as {seen_sets[member]!r}, which already has a cover", lineno)
        seen_sets[member] = key
        out.covers[key] = parts
    return out


def read_space(path: str | Path) -> SpaceFile:
    return parse_space(Path(path).read_text())


# longer names accepted for some bundled files
ALIASES = {"octahedron-with-paper-covers": "octahedron"}


def bundled_examples() -> list[str]:
    files = resources.files("mvbetti").joinpath("data")
    names = {p.name[:-3] for p in files.iterdir() if p.name.endswith(".sc")}
    return sorted(names | set(ALIASES))


def load_example(name: str) -> SpaceFile:
    """Parse one of the bundled ``data/<name>.sc`` files."""
    name = ALIASES.get(name, name)
    path = resources.files("mvbetti").joinpath("data", f"{name}.sc")
    if not path.is_file():
        raise KeyError(f"no bundled example {name!r}; have {bundled_examples()}")
    # bundled files list facets only, so closing them is expected
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClosureWarning)
        return parse_space(path.read_text())
