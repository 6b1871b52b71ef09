"""The admissible-index DAG: levels, covers, ancestors and unique-ancestor maps.

Level ``0`` holds the root, whose set is the whole space and whose cover is
the oracle's cover of it.  For an index ``alpha`` at level ``i`` the cover
``C(alpha)`` is a disjoint union, over every compatible choice of one cover
element ``c(theta)`` in ``C(theta)`` for each same-level ancestor ``theta``
of ``alpha``, of the oracle's cover of ``X_alpha`` intersected with the chosen
sets.  Every element remembers its choice (its *provenance*), so two
elements with equal sets coming from different choices stay distinct.
Nonempty formal products of up to ``ell - i + 2`` elements of ``C(alpha)``
become the level ``i + 1`` indices.

A choice is compatible when ``c(theta)`` descends from ``c(theta')``
whenever ``theta'`` is an ancestor of ``theta``; this is what makes the
unique-ancestor maps well defined and composable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Sequence

from .exceptions import CoverError, DagConstructionError
from .simplicial import SubcomplexRef, intersect, minimal_star_vertices, star_of

__all__ = [
    "CoverOracle",
    "StarCoverOracle",
    "ExplicitCoverOracle",
    "AdmissibleIndex",
    "AdmissibleDag",
    "DagStats",
    "build_dag",
    "unique_ancestor",
    "dag_stats",
]

CoverOracle = Callable[[SubcomplexRef], Sequence[tuple[str, SubcomplexRef]]]


class StarCoverOracle:
    """Covers a subcomplex by closed vertex stars taken inside it.

    With ``minimal=True`` (the default) only a greedy sub-family of stars
    that still covers is returned; see :func:`~mvbetti.simplicial.minimal_star_cover`.
    """

    def __init__(self, minimal: bool = True):
        self.minimal = minimal

    def __call__(self, x: SubcomplexRef) -> list[tuple[str, SubcomplexRef]]:
        apexes = minimal_star_vertices(x) if self.minimal else x.vertex_ids()
        names = x.ambient.vertices
        return [(f"st({names[v]})", star_of(x, v)) for v in apexes]

    def __repr__(self) -> str:
        return f"StarCoverOracle(minimal={self.minimal})"


class ExplicitCoverOracle:
    """Hand-chosen covers keyed by the set being covered.

    ``covers`` maps a subcomplex to its ordered labeled parts.  Sets without
    an entry go to ``fallback``, or raise :class:`CoverError` if there is none.
    """

    def __init__(
        self,
        covers: Mapping[SubcomplexRef, Sequence[tuple[str, SubcomplexRef]]],
        fallback: CoverOracle | None = None,
    ):
        self.covers = {k: list(v) for k, v in covers.items()}
        self.fallback = fallback

    def __call__(self, x: SubcomplexRef) -> list[tuple[str, SubcomplexRef]]:
        got = self.covers.get(x)
        if got is not None:
            return got
        if self.fallback is not None:
            return list(self.fallback(x))
        raise CoverError(f"no explicit cover given for a set with {len(x)} simplices")


@dataclass
class AdmissibleIndex:
    id: int
    factors: tuple[int, ...]
    level: int
    space: SubcomplexRef
    parent: int | None
    label: str
    # chosen element per same-level ancestor of the parent; cover elements only
    provenance: dict[int, int] = field(default_factory=dict)

    @property
    def is_element(self) -> bool:
        return len(self.factors) == 1 and self.factors[0] == self.id


class AdmissibleDag:
    """Container for the admissible indices.

    ``ancestors[i]`` is transitively closed over all levels;
    ``same_level[i]`` is its restriction to indices of the same level.
    Cover elements of level-``ell`` indices sit at level ``ell + 1``; no
    products are formed there.
    """

    def __init__(self, ell: int):
        self.ell = ell
        self.indices: list[AdmissibleIndex] = []
        self.covers: dict[int, tuple[int, ...]] = {}
        self.products: dict[tuple[int, ...], int] = {}
        self.ancestors: dict[int, frozenset[int]] = {}
        self.same_level: dict[int, frozenset[int]] = {}
        self._cover_sets: dict[int, frozenset[int]] = {}
        self._ua_cache: dict[tuple[int, int], int] = {}

    @property
    def root(self) -> AdmissibleIndex:
        return self.indices[0]

    def __getitem__(self, i: int) -> AdmissibleIndex:
        return self.indices[i]

    def __len__(self) -> int:
        return len(self.indices)

    def level_ids(self, level: int) -> list[int]:
        return [ix.id for ix in self.indices if ix.level == level]

    def product_id(self, elements: Sequence[int]) -> int | None:
        """Index id of the formal product of the given elements (any order)."""
        t = tuple(sorted(elements))
        if len(t) == 1:
            return t[0]
        return self.products.get(t)

    def cover_set(self, i: int) -> frozenset[int]:
        s = self._cover_sets.get(i)
        if s is None:
            s = self._cover_sets[i] = frozenset(self.covers.get(i, ()))
        return s

    def describe(self, i: int) -> str:
        ix = self.indices[i]
        if ix.id == 0:
            return "0"
        return "*".join(self.indices[f].label for f in ix.factors)

    def _add(self, **kw) -> AdmissibleIndex:
        ix = AdmissibleIndex(id=len(self.indices), **kw)
        self.indices.append(ix)
        return ix


def _oracle_parts(oracle: CoverOracle, x: SubcomplexRef) -> list[tuple[str, SubcomplexRef]]:
    parts = list(oracle(x))
    union = frozenset()
    for label, p in parts:
        if p.ambient is not x.ambient or not p.member <= x.member:
            raise CoverError(f"cover part {label!r} is not contained in the set it covers")
        union |= p.member
    if union != x.member:
        raise CoverError(f"cover oracle parts miss {len(x.member - union)} simplices")
    return parts


def _build_cover(dag: AdmissibleDag, alpha: int, oracle: CoverOracle) -> None:
    ax = dag[alpha]
    # ancestors before descendants: a same-level ancestor has strictly fewer ancestors
    order = sorted(dag.same_level[alpha], key=lambda t: (len(dag.same_level[t]), t))
    keys = {t: sorted(dag.same_level[t]) for t in order}
    groups: dict[int, dict[tuple[int, ...], list[int]]] = {}
    for t in order:
        g: dict[tuple[int, ...], list[int]] = {}
        for e in dag.covers[t]:
            prov = dag[e].provenance
            g.setdefault(tuple(prov[k] for k in keys[t]), []).append(e)
        groups[t] = g

    elements: list[int] = []
    choice: dict[int, int] = {}

    def walk(k: int, x: SubcomplexRef) -> None:
        if k == len(order):
            for label, part in _oracle_parts(oracle, x):
                e = dag._add(
                    factors=(),
                    level=ax.level + 1,
                    space=part,
                    parent=alpha,
                    label=label,
                    provenance=dict(choice),
                )
                e.factors = (e.id,)
                elements.append(e.id)
            return
        t = order[k]
        for e in groups[t].get(tuple(choice[j] for j in keys[t]), ()):
            y = intersect([x, dag[e].space])
            if y:
                choice[t] = e
                walk(k + 1, y)
                del choice[t]

    walk(0, ax.space)
    dag.covers[alpha] = tuple(elements)


def _build_products(dag: AdmissibleDag, alpha: int) -> None:
    ax = dag[alpha]
    elems = dag.covers[alpha]
    max_size = dag.ell - ax.level + 2
    level = [((e,), dag[e].space) for e in elems]
    size = 1
    while level and size < max_size:
        nxt = []
        for t, x in level:
            start = elems.index(t[-1]) + 1
            for e in elems[start:]:
                y = intersect([x, dag[e].space])
                if y:
                    u = t + (e,)
                    ix = dag._add(
                        factors=u,
                        level=ax.level + 1,
                        space=y,
                        parent=alpha,
                        label="*".join(dag[f].label for f in u),
                    )
                    dag.products[u] = ix.id
                    nxt.append((u, y))
        level = nxt
        size += 1


def _same_level_ancestors(dag: AdmissibleDag, i: int) -> frozenset[int]:
    """Indices ``Q`` of the same level with every factor of ``Q`` equal to,
    or an ancestor of, some factor of ``i``."""
    below: dict[int, set[int]] = {}
    for f in dag[i].factors:
        for x in (f, *dag[f].provenance.values()):
            below.setdefault(dag[x].parent, set()).add(x)
    out = set()
    for xs in below.values():
        xs = sorted(xs)
        for k in range(1, len(xs) + 1):
            for q in combinations(xs, k):
                qid = dag.product_id(q)
                if qid is not None and qid != i:
                    out.add(qid)
    return frozenset(out)


def _close_ancestors(dag: AdmissibleDag, i: int) -> frozenset[int]:
    out = set(dag.same_level[i])
    for q in (i, *dag.same_level[i]):
        parent = dag[q].parent
        if parent is not None:
            out.add(parent)
            out |= dag.ancestors[parent]
    return frozenset(out)


def build_dag(s: SubcomplexRef, ell: int, oracle: CoverOracle | None = None) -> AdmissibleDag:
    """Admissible indices of levels ``0..ell`` with their covers.

    Products whose sets are empty are not materialised; their double
    complexes would be zero.
    """
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    if oracle is None:
        oracle = StarCoverOracle()
    dag = AdmissibleDag(ell)
    dag._add(factors=(), level=0, space=s, parent=None, label="0")
    dag.same_level[0] = frozenset()
    dag.ancestors[0] = frozenset()
    for level in range(ell + 1):
        current = dag.level_ids(level)
        for alpha in current:
            _build_cover(dag, alpha, oracle)
        if level < ell:
            for alpha in current:
                _build_products(dag, alpha)
        for i in dag.level_ids(level + 1):
            dag.same_level[i] = _same_level_ancestors(dag, i)
        for i in dag.level_ids(level + 1):
            dag.ancestors[i] = _close_ancestors(dag, i)
    return dag


def unique_ancestor(dag: AdmissibleDag, alpha_prime: int, beta: int) -> int:
    """The element of ``C(beta)`` that is an ancestor of ``alpha_prime``.

    ``alpha_prime`` is a cover element of some ``alpha`` and ``beta`` is
    ``alpha`` itself or one of its same-level ancestors.
    """
    key = (alpha_prime, beta)
    got = dag._ua_cache.get(key)
    if got is not None:
        return got
    e = dag[alpha_prime]
    alpha = e.parent
    if not e.is_element or alpha is None:
        raise ValueError(f"{dag.describe(alpha_prime)} is not a cover element")
    if beta == alpha:
        got = alpha_prime
    else:
        if beta not in dag.ancestors[alpha]:
            raise ValueError(f"{dag.describe(beta)} is not an ancestor of {dag.describe(alpha)}")
        found = dag.ancestors[alpha_prime] & dag.cover_set(beta)
        if len(found) != 1:
            raise DagConstructionError(
                f"{dag.describe(alpha_prime)} has {len(found)} ancestors in C({dag.describe(beta)})"
            )
        (got,) = found
    dag._ua_cache[key] = got
    return got


@dataclass(frozen=True)
class DagStats:
    counts_per_level: tuple[int, ...]
    max_cover_size: int
    total_indices: int
    leaf_elements: int


def dag_stats(dag: AdmissibleDag) -> DagStats:
    """Index counts for levels ``0..ell``; cover elements of level-``ell``
    indices are reported separately as ``leaf_elements``."""
    counts = tuple(len(dag.level_ids(k)) for k in range(dag.ell + 1))
    return DagStats(
        counts_per_level=counts,
        max_cover_size=max((len(c) for c in dag.covers.values()), default=0),
        total_indices=sum(counts),
        leaf_elements=len(dag.level_ids(dag.ell + 1)),
    )
