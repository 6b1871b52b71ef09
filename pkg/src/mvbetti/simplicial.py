"""Finite simplicial complexes: cochains, components, intersections, and the
Mayer-Vietoris double complex of a subcomplex cover.

Simplices are stored as strictly ascending tuples of vertex indices, so the
coboundary sign of a face is ``(-1)^i`` for the omitted position ``i``.
Every vector space built here has the simplices (or components) of its
subcomplex as basis, in ambient id order: by dimension, then lexicographic
in vertex order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .complex import ComplexMap, GradedComplex, cohomology_dims, truncate
from .doublecomplex import DoubleComplex, tot_layout, total_complex
from .exceptions import CoverError
from .linalg import QMatrix, assemble

__all__ = [
    "SimplicialComplex",
    "SubcomplexRef",
    "ComponentDecomposition",
    "cochain_complex",
    "simplicial_cohomology",
    "connected_components",
    "h0_restriction",
    "intersect",
    "union",
    "mv_double_complex",
    "restriction_to_total_map",
    "star_cover",
    "minimal_star_cover",
    "minimal_star_vertices",
    "star_of",
    "has_trivial_reduced_cohomology",
]


class SimplicialComplex:
    """A face-closed set of simplices on an ordered vertex list.

    >>> K = SimplicialComplex.from_facets([("a", "b", "c")])
    >>> len(K), K.dimension
    (7, 2)
    """

    def __init__(
        self,
        vertices: Sequence[Hashable],
        simplices: Iterable[Iterable[Hashable]] = (),
        close: bool = True,
    ):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        found = {(i,) for i in range(len(self.vertices))}
        for s in simplices:
            try:
                t = tuple(sorted({self.vertex_index[v] for v in s}))
            except KeyError as exc:
                raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
            if t:
                found.add(t)
        closed = set(found)
        for t in found:
            for k in range(1, len(t)):
                closed.update(combinations(t, k))
        if not close and closed != found:
            raise ValueError("simplex set is not closed under faces")
        self.simplices = tuple(sorted(closed, key=lambda t: (len(t), t)))
        self.simplex_id = {t: i for i, t in enumerate(self.simplices)}
        self._faces: dict[int, tuple[int, ...]] = {}
        self._full = SubcomplexRef(self, frozenset(range(len(self.simplices))), check=False)

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[Hashable]], vertices: Sequence[Hashable] | None = None):
        facets = [tuple(f) for f in facets]
        if vertices is None:
            seen: dict[Hashable, None] = {}
            for f in facets:
                for v in f:
                    seen.setdefault(v)
            vertices = sorted(seen, key=_label_key)
        return cls(vertices, facets)

    def __len__(self) -> int:
        return len(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.simplices)} simplices)"

    @property
    def dimension(self) -> int:
        return len(self.simplices[-1]) - 1 if self.simplices else -1

    @property
    def full(self) -> "SubcomplexRef":
        return self._full

    def faces(self, sid: int) -> tuple[int, ...]:
        """Ids of all nonempty faces of simplex ``sid``, itself included."""
        got = self._faces.get(sid)
        if got is None:
            t = self.simplices[sid]
            got = tuple(
                self.simplex_id[f] for k in range(1, len(t) + 1) for f in combinations(t, k)
            )
            self._faces[sid] = got
        return got

    def closure(self, ids: Iterable[int]) -> "SubcomplexRef":
        out: set[int] = set()
        for sid in ids:
            if sid not in out:
                out.update(self.faces(sid))
        return SubcomplexRef(self, frozenset(out), check=False)

    def subcomplex(self, simplices: Iterable[Iterable[Hashable]]) -> "SubcomplexRef":
        """Face closure of the given simplices (given by vertex labels)."""
        ids = []
        for s in simplices:
            t = tuple(sorted(self.vertex_index[v] for v in s))
            if t not in self.simplex_id:
                raise ValueError(f"{tuple(s)} is not a simplex of the complex")
            ids.append(self.simplex_id[t])
        return self.closure(ids)

    def star(self, vertex: Hashable) -> "SubcomplexRef":
        return star_of(self.full, self.vertex_index[vertex])


def _label_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


class SubcomplexRef:
    """A face-closed subset of an ambient complex's simplices."""

    __slots__ = ("ambient", "member", "_hash")

    def __init__(self, ambient: SimplicialComplex, member: frozenset[int], check: bool = True):
        self.ambient = ambient
        self.member = frozenset(member)
        self._hash = hash(self.member)
        if check:
            for sid in self.member:
                if not set(ambient.faces(sid)) <= self.member:
                    raise ValueError(f"subcomplex not closed: faces of {ambient.simplices[sid]} missing")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubcomplexRef):
            return NotImplemented
        return self.ambient is other.ambient and self.member == other.member

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.member)

    def __bool__(self) -> bool:
        return bool(self.member)

    def __le__(self, other: "SubcomplexRef") -> bool:
        return self.ambient is other.ambient and self.member <= other.member

    def __and__(self, other: "SubcomplexRef") -> "SubcomplexRef":
        return intersect([self, other])

    def __or__(self, other: "SubcomplexRef") -> "SubcomplexRef":
        return union([self, other])

    def __repr__(self) -> str:
        return f"SubcomplexRef({len(self.member)} simplices, dim {self.dimension})"

    @property
    def dimension(self) -> int:
        return max((len(self.ambient.simplices[s]) - 1 for s in self.member), default=-1)

    def ids(self, q: int | None = None) -> list[int]:
        """Member ids in basis order, optionally only the ``q``-simplices."""
        simp = self.ambient.simplices
        if q is None:
            return sorted(self.member)
        return sorted(s for s in self.member if len(simp[s]) == q + 1)

    def simplices(self, q: int | None = None) -> list[tuple[int, ...]]:
        simp = self.ambient.simplices
        return [simp[s] for s in self.ids(q)]

    def vertex_ids(self) -> list[int]:
        simp = self.ambient.simplices
        return sorted(simp[s][0] for s in self.member if len(simp[s]) == 1)

    def facets(self) -> list[int]:
        """Ids of maximal simplices."""
        covered: set[int] = set()
        for s in self.member:
            covered.update(f for f in self.ambient.faces(s) if f != s)
        return sorted(self.member - covered)

    def labels(self, q: int) -> list[tuple]:
        verts = self.ambient.vertices
        return [tuple(verts[i] for i in t) for t in self.simplices(q)]


class ComponentDecomposition:
    """Connected components of a subcomplex; the natural basis of its H^0.

    Components are numbered by their smallest vertex.
    """

    __slots__ = ("space", "component_of", "count")

    def __init__(self, space: SubcomplexRef, component_of: dict[int, int], count: int):
        self.space = space
        self.component_of = component_of
        self.count = count

    def vertex_component(self, vertex: int) -> int:
        return self.component_of[self.space.ambient.simplex_id[(vertex,)]]

    def members(self, k: int) -> list[int]:
        return sorted(s for s, c in self.component_of.items() if c == k)


def intersect(parts: Sequence[SubcomplexRef]) -> SubcomplexRef:
    if not parts:
        raise ValueError("intersect needs at least one subcomplex")
    amb = parts[0].ambient
    if any(p.ambient is not amb for p in parts):
        raise ValueError("subcomplexes live in different ambient complexes")
    if len(parts) == 1:
        return parts[0]
    member = frozenset.intersection(*(p.member for p in parts))
    return SubcomplexRef(amb, member, check=False)


def union(parts: Sequence[SubcomplexRef]) -> SubcomplexRef:
    if not parts:
        raise ValueError("union needs at least one subcomplex")
    amb = parts[0].ambient
    if any(p.ambient is not amb for p in parts):
        raise ValueError("subcomplexes live in different ambient complexes")
    return SubcomplexRef(amb, frozenset().union(*(p.member for p in parts)), check=False)


@lru_cache(maxsize=None)
def cochain_complex(a: SubcomplexRef) -> GradedComplex:
    """Simplicial cochains of ``a`` with the alternating-sum coboundary."""
    if not a:
        return GradedComplex.zero()
    top = a.dimension
    amb = a.ambient
    bases = [a.ids(q) for q in range(top + 1)]
    diffs = []
    for q in range(top):
        col = {sid: j for j, sid in enumerate(bases[q])}
        entries = {}
        for i, sid in enumerate(bases[q + 1]):
            t = amb.simplices[sid]
            for k in range(len(t)):
                face = amb.simplex_id[t[:k] + t[k + 1:]]
                entries[(i, col[face])] = -1 if k % 2 else 1
        diffs.append(QMatrix(len(bases[q + 1]), len(bases[q]), entries))
    labels = [a.labels(q) for q in range(top + 1)]
    return GradedComplex([len(b) for b in bases], diffs, 0, labels, check=False)


def simplicial_cohomology(a: SubcomplexRef) -> list[int]:
    """Rational Betti numbers of ``a`` by brute force; ``[]`` for the empty complex."""
    return cohomology_dims(cochain_complex(a))


def has_trivial_reduced_cohomology(a: SubcomplexRef) -> bool:
    """Necessary condition for contractibility: cohomology of a point."""
    h = simplicial_cohomology(a)
    return bool(h) and h[0] == 1 and not any(h[1:])


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # the smaller vertex index stays the root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@lru_cache(maxsize=None)
def connected_components(a: SubcomplexRef) -> ComponentDecomposition:
    simp = a.ambient.simplices
    verts = a.vertex_ids()
    uf = _UnionFind(verts)
    for sid in a.member:
        t = simp[sid]
        for v in t[1:]:
            uf.union(t[0], v)
    roots = sorted({uf.find(v) for v in verts})
    index = {r: k for k, r in enumerate(roots)}
    component_of = {sid: index[uf.find(simp[sid][0])] for sid in a.member}
    return ComponentDecomposition(a, component_of, len(roots))


@lru_cache(maxsize=None)
def h0_restriction(bigger: SubcomplexRef, smaller: SubcomplexRef) -> QMatrix:
    """Matrix of ``H^0(bigger) -> H^0(smaller)``: entry ``(i, j)`` is 1 iff
    component ``i`` of ``smaller`` lies in component ``j`` of ``bigger``."""
    if not smaller <= bigger:
        raise ValueError("h0_restriction: target is not contained in source")
    big = connected_components(bigger)
    small = connected_components(smaller)
    entries = {}
    firsts: dict[int, int] = {}
    for sid, k in small.component_of.items():
        if k not in firsts or sid < firsts[k]:
            firsts[k] = sid
    for k, sid in firsts.items():
        entries[(k, big.component_of[sid])] = 1
    return QMatrix(small.count, big.count, entries)


def _check_cover(a: SubcomplexRef, parts: Sequence[SubcomplexRef]) -> None:
    if any(p.ambient is not a.ambient for p in parts):
        raise CoverError("cover parts live in a different ambient complex")
    got = frozenset().union(*(p.member for p in parts)) if parts else frozenset()
    if got != a.member:
        raise CoverError(
            f"cover parts have union of {len(got)} simplices, space has {len(a.member)}"
        )


def nonempty_tuples(parts: Sequence[SubcomplexRef], max_size: int | None = None):
    """Ascending index tuples whose intersection is nonempty, with that intersection.

    Yields ``(tuple, SubcomplexRef)`` grouped by tuple size, lexicographic within a size.
    """
    n = len(parts)
    limit = n if max_size is None else min(n, max_size)
    level = [((i,), parts[i]) for i in range(n) if parts[i]]
    size = 1
    while level and size <= limit:
        yield from level
        if size == limit:
            break
        nxt = []
        for t, x in level:
            for j in range(t[-1] + 1, n):
                y = x & parts[j]
                if y:
                    nxt.append((t + (j,), y))
        level = nxt
        size += 1


def _restriction_block(big: SubcomplexRef, small: SubcomplexRef, q: int) -> QMatrix:
    """Restriction of ``q``-cochains from ``big`` to ``small``."""
    cols = {sid: j for j, sid in enumerate(big.ids(q))}
    rows = small.ids(q)
    return QMatrix(len(rows), len(cols), {(i, cols[sid]): 1 for i, sid in enumerate(rows)})


def mv_double_complex(
    a: SubcomplexRef,
    cover_parts: Sequence[SubcomplexRef],
    max_degree: int | None = None,
) -> DoubleComplex:
    """The Mayer-Vietoris double complex of a subcomplex cover.

    Column ``p`` is the sum of cochain complexes of ``(p+1)``-fold
    intersections; rows are alternating sums of restrictions.  With
    ``max_degree`` only terms with ``p + q <= max_degree`` are built, which
    equals :func:`~mvbetti.doublecomplex.truncate_antidiagonal` of the full
    complex.
    """
    _check_cover(a, cover_parts)
    limit = None if max_degree is None else max_degree + 1
    tuples = {t: x for t, x in nonempty_tuples(cover_parts, limit)}
    by_p: dict[int, list[tuple[int, ...]]] = {}
    for t in tuples:
        by_p.setdefault(len(t) - 1, []).append(t)

    def allowed(p, q):
        return max_degree is None or p + q <= max_degree

    layout: dict[tuple[int, int], dict[tuple[int, ...], tuple[int, int]]] = {}
    dims: dict[tuple[int, int], int] = {}
    labels: dict[tuple[int, int], list] = {}
    for p, ts in by_p.items():
        qmax = max(tuples[t].dimension for t in ts)
        for q in range(qmax + 1):
            if not allowed(p, q):
                continue
            off, lay, lab = 0, {}, []
            for t in ts:
                n = len(tuples[t].ids(q))
                if n:
                    lay[t] = (off, n)
                    lab.extend((t, s) for s in tuples[t].labels(q))
                    off += n
            if off:
                layout[(p, q)] = lay
                dims[(p, q)] = off
                labels[(p, q)] = lab

    vert, horiz = {}, {}
    for (p, q), lay in layout.items():
        up = layout.get((p, q + 1))
        if up is not None:
            placed = []
            for t, (off, _) in lay.items():
                if t in up:
                    placed.append((up[t][0], off, cochain_complex(tuples[t]).diff(q)))
            vert[(p, q)] = assemble(dims[(p, q + 1)], dims[(p, q)], placed)
        right = layout.get((p + 1, q))
        if right is not None:
            placed = []
            for t2, (roff, _) in right.items():
                for i in range(len(t2)):
                    face = t2[:i] + t2[i + 1:]
                    if face not in lay:
                        continue
                    block = _restriction_block(tuples[face], tuples[t2], q)
                    placed.append((roff, lay[face][0], block if i % 2 == 0 else -block))
            horiz[(p, q)] = assemble(dims[(p + 1, q)], dims[(p, q)], placed)
    return DoubleComplex(dims, horiz, vert, commuting=True, labels=labels)


def restriction_to_total_map(
    a: SubcomplexRef, cover_parts: Sequence[SubcomplexRef], t: int
) -> ComplexMap:
    """The map from truncated cochains of ``a`` into ``Tot`` of the truncated
    Mayer-Vietoris complex, restricting a cochain to every part."""
    mv = mv_double_complex(a, cover_parts, max_degree=t)
    tot = total_complex(mv)
    source = truncate(cochain_complex(a), t)
    mats = {}
    for n in range(source.max_degree + 1):
        lay = tot_layout(mv, n)
        rows = tot.dim(n)
        if not lay or lay[0][0] != 0:
            mats[n] = QMatrix.zeros(rows, source.dim(n))
            continue
        off0 = lay[0][2]
        placed, off = [], off0
        for part in cover_parts:
            if not part:
                continue
            blk = _restriction_block(a, part, n)
            if blk.rows:
                placed.append((off, 0, blk))
                off += blk.rows
        mats[n] = assemble(rows, source.dim(n), placed)
    return ComplexMap(source, tot, mats)


def star_of(a: SubcomplexRef, vertex: int) -> SubcomplexRef:
    """Closed star of a vertex (given by index) inside ``a``."""
    simp = a.ambient.simplices
    return a.ambient.closure(s for s in a.member if vertex in simp[s])


def star_cover(a: SubcomplexRef) -> list[SubcomplexRef]:
    """One closed vertex star per vertex of ``a``; each is a cone, hence contractible."""
    return [star_of(a, v) for v in a.vertex_ids()]


def minimal_star_vertices(a: SubcomplexRef) -> list[int]:
    """Apex vertices chosen by :func:`minimal_star_cover`, ascending."""
    simp = a.ambient.simplices
    uncovered = set(a.facets())
    chosen = []
    while uncovered:
        counts: dict[int, int] = {}
        for f in uncovered:
            for v in simp[f]:
                counts[v] = counts.get(v, 0) + 1
        best = min(counts, key=lambda v: (-counts[v], v))
        chosen.append(best)
        uncovered = {f for f in uncovered if best not in simp[f]}
    return sorted(chosen)


def minimal_star_cover(a: SubcomplexRef) -> list[SubcomplexRef]:
    """A sub-family of :func:`star_cover` that still covers ``a``.

    Vertices are picked greedily by how many uncovered facets their star
    contains (ties to the smaller vertex) and the chosen stars are returned
    in vertex order.  A cone comes back as a single part.
    """
    return [star_of(a, v) for v in minimal_star_vertices(a)]
